//! Operational carbon of federated-learning campaigns, estimated from client
//! compute and communication time logs.
//!
//! Compute time is charged at the client device power and upload/download
//! time at the router power; all other energy is omitted. No PUE applies at
//! the edge, and client-device embodied carbon is an optional attachment.

use serde::Serialize;

use crate::accounting::{embodied_attribution, mean_intensity};
use crate::error::{Error, Result};
use crate::model::{CarbonIntensitySeries, HardwarePlatform};

/// Default client device power draw, kW (3 W).
pub const DEFAULT_DEVICE_POWER_KW: f64 = 0.003;
/// Default home-router power draw, kW (7.5 W).
pub const DEFAULT_ROUTER_POWER_KW: f64 = 0.0075;

/// Per-client time log for one campaign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FLClientLog {
    pub compute_hours: f64,
    pub download_hours: f64,
    pub upload_hours: f64,
}

impl FLClientLog {
    pub fn new(compute_hours: f64, download_hours: f64, upload_hours: f64) -> Self {
        Self {
            compute_hours,
            download_hours,
            upload_hours,
        }
    }
}

/// Client time usage, either per-client logs or pre-aggregated totals.
/// Both paths reduce to the same summed hours, so they agree exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum FlUsage {
    PerClient(Vec<FLClientLog>),
    Aggregate {
        compute_hours: f64,
        download_hours: f64,
        upload_hours: f64,
    },
}

impl FlUsage {
    fn totals(&self) -> Result<(f64, f64, f64)> {
        let (c, d, u) = match self {
            FlUsage::PerClient(logs) => {
                let mut c = 0.0;
                let mut d = 0.0;
                let mut u = 0.0;
                for log in logs {
                    c += log.compute_hours;
                    d += log.download_hours;
                    u += log.upload_hours;
                }
                (c, d, u)
            }
            FlUsage::Aggregate {
                compute_hours,
                download_hours,
                upload_hours,
            } => (*compute_hours, *download_hours, *upload_hours),
        };
        for (label, v) in [("compute", c), ("download", d), ("upload", u)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput {
                    what: format!("{label} time must be a finite value >= 0 h, got {v}"),
                });
            }
        }
        Ok((c, d, u))
    }
}

/// A federated-learning campaign: client usage plus the edge energy context.
#[derive(Debug, Clone, PartialEq)]
pub struct FLCampaign {
    pub usage: FlUsage,
    pub device_power_kw: f64,
    pub router_power_kw: f64,
    pub edge_intensity: CarbonIntensitySeries,
    /// Optional client-device platform for embodied attribution.
    pub device_platform: Option<HardwarePlatform>,
}

impl FLCampaign {
    pub fn new(usage: FlUsage, edge_intensity: CarbonIntensitySeries) -> Self {
        Self {
            usage,
            device_power_kw: DEFAULT_DEVICE_POWER_KW,
            router_power_kw: DEFAULT_ROUTER_POWER_KW,
            edge_intensity,
            device_platform: None,
        }
    }

    pub fn with_powers(mut self, device_power_kw: f64, router_power_kw: f64) -> Self {
        self.device_power_kw = device_power_kw;
        self.router_power_kw = router_power_kw;
        self
    }

    pub fn with_device_platform(mut self, platform: HardwarePlatform) -> Self {
        self.device_platform = Some(platform);
        self
    }

    fn check_powers(&self) -> Result<()> {
        for (label, v) in [
            ("device_power_kw", self.device_power_kw),
            ("router_power_kw", self.router_power_kw),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput {
                    what: format!("{label} must be a finite value > 0, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// `(compute_kwh, comm_kwh)`: compute time × device power, and
/// (download + upload) time × router power. Nothing else is added.
pub fn fl_energy(campaign: &FLCampaign) -> Result<(f64, f64)> {
    campaign.check_powers()?;
    let (compute_h, download_h, upload_h) = campaign.usage.totals()?;
    Ok((
        compute_h * campaign.device_power_kw,
        (download_h + upload_h) * campaign.router_power_kw,
    ))
}

/// Operational carbon of the campaign, kgCO₂e: total edge energy times the
/// mean edge intensity, with no PUE.
pub fn fl_carbon(campaign: &FLCampaign) -> Result<f64> {
    let (compute_kwh, comm_kwh) = fl_energy(campaign)?;
    let series = &campaign.edge_intensity;
    let mean = mean_intensity(series, (series.start_h(), series.end_h()))?;
    Ok((compute_kwh + comm_kwh) * mean / 1000.0)
}

/// Full campaign estimate for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlEstimate {
    pub compute_kwh: f64,
    pub comm_kwh: f64,
    /// Share of edge energy spent on wireless communication.
    pub comm_energy_share: f64,
    pub operational_kgco2e: f64,
    /// Present only when a device platform is attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embodied_kgco2e: Option<f64>,
}

/// Computes energies, carbon, and the communication energy share; attributes
/// device embodied carbon when a platform is attached (amortized over the
/// logged compute hours).
pub fn estimate(campaign: &FLCampaign) -> Result<FlEstimate> {
    let (compute_kwh, comm_kwh) = fl_energy(campaign)?;
    let operational_kgco2e = fl_carbon(campaign)?;
    let total = compute_kwh + comm_kwh;
    let embodied_kgco2e = match &campaign.device_platform {
        Some(platform) => {
            let (compute_h, _, _) = campaign.usage.totals()?;
            Some(embodied_attribution(platform, compute_h, 1.0)?.kgco2e)
        }
        None => None,
    };
    Ok(FlEstimate {
        compute_kwh,
        comm_kwh,
        comm_energy_share: if total > 0.0 { comm_kwh / total } else { 0.0 },
        operational_kgco2e,
        embodied_kgco2e,
    })
}
