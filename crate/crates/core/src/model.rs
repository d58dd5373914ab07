//! Shared domain types: hardware platforms, ML pipeline phases, grid intensity
//! series, tasks, and per-phase carbon breakdowns.
//!
//! All types are immutable after construction and safe to share across
//! concurrent readers. Invariant violations are either rejected at
//! construction (`CarbonIntensitySeries`) or reported by [`validate`];
//! nothing is silently accepted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default embodied carbon for an accelerator-equipped node, kgCO₂e.
pub const DEFAULT_ACCEL_EMBODIED_KGCO2E: f64 = 2000.0;
/// Default embodied carbon for a CPU-only node, kgCO₂e (half the accelerated figure).
pub const DEFAULT_CPU_EMBODIED_KGCO2E: f64 = 1000.0;
/// Default node service lifetime: 4 years, the middle of the 3–5 year range.
pub const DEFAULT_LIFETIME_HOURS: f64 = 4.0 * 365.0 * 24.0;
/// Default datacenter power usage effectiveness.
pub const DEFAULT_PUE: f64 = 1.1;

/// A node type: average power draw, embodied manufacturing carbon, and lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwarePlatform {
    pub name: String,
    /// Average draw at reference utilization, kW per node.
    pub device_power_kw: f64,
    /// Manufacturing (embodied) carbon per node, kgCO₂e.
    pub embodied_kgco2e: f64,
    /// Service lifetime in hours over which embodied carbon is amortized.
    pub lifetime_hours: f64,
    /// Accelerator-equipped node vs CPU-only.
    pub accelerated: bool,
}

impl HardwarePlatform {
    /// Accelerator node with default embodied carbon (2000 kg) and 4-year lifetime.
    pub fn accelerated(name: impl Into<String>, device_power_kw: f64) -> Self {
        Self {
            name: name.into(),
            device_power_kw,
            embodied_kgco2e: DEFAULT_ACCEL_EMBODIED_KGCO2E,
            lifetime_hours: DEFAULT_LIFETIME_HOURS,
            accelerated: true,
        }
    }

    /// CPU-only node with default embodied carbon (1000 kg) and 4-year lifetime.
    pub fn cpu_only(name: impl Into<String>, device_power_kw: f64) -> Self {
        Self {
            name: name.into(),
            device_power_kw,
            embodied_kgco2e: DEFAULT_CPU_EMBODIED_KGCO2E,
            lifetime_hours: DEFAULT_LIFETIME_HOURS,
            accelerated: false,
        }
    }
}

/// One phase of the ML development pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    #[serde(alias = "data")]
    DataStorageIngestion,
    Experimentation,
    OfflineTraining,
    OnlineTraining,
    Inference,
}

impl PhaseKind {
    pub const ALL: [PhaseKind; 5] = [
        PhaseKind::DataStorageIngestion,
        PhaseKind::Experimentation,
        PhaseKind::OfflineTraining,
        PhaseKind::OnlineTraining,
        PhaseKind::Inference,
    ];

    /// Recurring phases are measured over the offline-training period.
    pub fn is_recurring(self) -> bool {
        matches!(self, PhaseKind::OnlineTraining | PhaseKind::Inference)
    }

    /// True when the phase sits on the training side of the train/inference split
    /// (experimentation plus offline and online training).
    pub fn is_training_side(self) -> bool {
        matches!(
            self,
            PhaseKind::Experimentation | PhaseKind::OfflineTraining | PhaseKind::OnlineTraining
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            PhaseKind::DataStorageIngestion => "data_storage_ingestion",
            PhaseKind::Experimentation => "experimentation",
            PhaseKind::OfflineTraining => "offline_training",
            PhaseKind::OnlineTraining => "online_training",
            PhaseKind::Inference => "inference",
        }
    }
}

/// One phase's resource reservation.
///
/// `utilization` is the useful-work share of reserved node-hours. Accounting
/// charges embodied carbon by reservation time share, not by utilization;
/// utilization is consumed only by scenario sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub kind: PhaseKind,
    pub platform: HardwarePlatform,
    pub node_count: u32,
    /// Wall-clock reservation, hours. Recurring phases use the offline-training period.
    pub duration_hours: f64,
    /// Useful-work share of reserved node-hours, in (0, 1].
    pub utilization: f64,
}

impl PhaseProfile {
    pub fn new(
        kind: PhaseKind,
        platform: HardwarePlatform,
        node_count: u32,
        duration_hours: f64,
    ) -> Self {
        Self {
            kind,
            platform,
            node_count,
            duration_hours,
            utilization: 1.0,
        }
    }

    pub fn with_utilization(mut self, utilization: f64) -> Self {
        self.utilization = utilization;
        self
    }

    /// Reserved node-hours (node count × wall-clock duration).
    pub fn node_hours(&self) -> f64 {
        f64::from(self.node_count) * self.duration_hours
    }
}

/// Grid carbon accounting mode.
///
/// Location-based accounting uses the local grid intensity as-is;
/// market-based accounting lets purchased renewable energy offset
/// operational emissions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccountingMode {
    #[serde(alias = "location")]
    LocationBased,
    #[serde(alias = "market")]
    MarketBased,
}

/// One intensity sample: the grid intensity holds from `time_h` until the next sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensitySample {
    pub time_h: f64,
    pub g_per_kwh: f64,
}

/// Time-stamped grid carbon intensity, interpreted as a right-continuous step
/// function. The last sample's value extends indefinitely.
#[derive(Debug, Clone, PartialEq)]
pub struct CarbonIntensitySeries {
    samples: Vec<IntensitySample>,
    mode: AccountingMode,
}

impl CarbonIntensitySeries {
    /// Builds a series from `(time_h, g_per_kwh)` pairs. Timestamps must be
    /// strictly increasing, intensities non-negative, and at least one sample
    /// must be present.
    pub fn new(samples: Vec<(f64, f64)>, mode: AccountingMode) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput {
                what: "intensity series requires at least one sample".into(),
            });
        }
        let mut out = Vec::with_capacity(samples.len());
        let mut prev: Option<f64> = None;
        for (i, (t, v)) in samples.into_iter().enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::NonFinite {
                    what: format!("intensity sample {i}"),
                });
            }
            if v < 0.0 {
                return Err(Error::InvalidInput {
                    what: format!("intensity sample {i}: negative intensity {v}"),
                });
            }
            if let Some(p) = prev {
                if t <= p {
                    return Err(Error::InvalidInput {
                        what: format!(
                            "intensity sample {i}: timestamp {t} h does not increase past {p} h"
                        ),
                    });
                }
            }
            prev = Some(t);
            out.push(IntensitySample {
                time_h: t,
                g_per_kwh: v,
            });
        }
        Ok(Self { samples: out, mode })
    }

    /// Constant intensity, anchored at t = 0.
    pub fn constant(g_per_kwh: f64, mode: AccountingMode) -> Result<Self> {
        Self::new(vec![(0.0, g_per_kwh)], mode)
    }

    pub fn samples(&self) -> &[IntensitySample] {
        &self.samples
    }

    pub fn mode(&self) -> AccountingMode {
        self.mode
    }

    /// Timestamp of the first sample; the step function is undefined before it.
    pub fn start_h(&self) -> f64 {
        self.samples[0].time_h
    }

    /// Timestamp of the last sample; its value extends beyond this point.
    pub fn end_h(&self) -> f64 {
        self.samples[self.samples.len() - 1].time_h
    }
}

/// An ML task: a set of phase reservations plus the energy-supply context
/// they run under.
#[derive(Debug, Clone, PartialEq)]
pub struct MLTask {
    pub name: String,
    pub phases: Vec<PhaseProfile>,
    /// Datacenter power usage effectiveness, ≥ 1.
    pub pue: f64,
    pub intensity: CarbonIntensitySeries,
    /// Fraction of consumed energy matched by purchased renewable energy, in [0, 1].
    /// Only takes effect under market-based accounting.
    pub renewable_matching: f64,
}

impl MLTask {
    pub fn new(name: impl Into<String>, intensity: CarbonIntensitySeries) -> Self {
        Self {
            name: name.into(),
            phases: Vec::new(),
            pue: DEFAULT_PUE,
            intensity,
            renewable_matching: 0.0,
        }
    }

    pub fn with_pue(mut self, pue: f64) -> Self {
        self.pue = pue;
        self
    }

    pub fn with_renewable_matching(mut self, fraction: f64) -> Self {
        self.renewable_matching = fraction;
        self
    }

    pub fn with_phase(mut self, phase: PhaseProfile) -> Self {
        self.phases.push(phase);
        self
    }
}

/// A named invariant violation. `field` is a path such as
/// `phases[2].utilization`; `rule` states the violated constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn check(violations: &mut Vec<Violation>, ok: bool, field: String, rule: &str) {
    if !ok {
        violations.push(Violation {
            field,
            rule: rule.to_string(),
        });
    }
}

/// Reports every invariant violation in the task. Returns an empty list iff
/// the task is well-formed; validation never aborts.
pub fn validate(task: &MLTask) -> Vec<Violation> {
    let mut v = Vec::new();
    check(
        &mut v,
        task.pue.is_finite() && task.pue >= 1.0,
        "pue".into(),
        "must be a finite value >= 1.0",
    );
    check(
        &mut v,
        task.renewable_matching.is_finite() && (0.0..=1.0).contains(&task.renewable_matching),
        "renewable_matching".into(),
        "must be a fraction in [0, 1]",
    );
    for (i, phase) in task.phases.iter().enumerate() {
        let at = |f: &str| format!("phases[{i}].{f}");
        check(
            &mut v,
            phase.duration_hours.is_finite() && phase.duration_hours >= 0.0,
            at("duration_hours"),
            "must be a finite value >= 0",
        );
        check(
            &mut v,
            phase.utilization.is_finite() && phase.utilization > 0.0 && phase.utilization <= 1.0,
            at("utilization"),
            "must be a fraction in (0, 1]",
        );
        check(
            &mut v,
            phase.node_count >= 1,
            at("node_count"),
            "must be >= 1",
        );
        let p = &phase.platform;
        check(
            &mut v,
            p.device_power_kw.is_finite() && p.device_power_kw > 0.0,
            at("platform.device_power_kw"),
            "must be a finite value > 0",
        );
        check(
            &mut v,
            p.embodied_kgco2e.is_finite() && p.embodied_kgco2e >= 0.0,
            at("platform.embodied_kgco2e"),
            "must be a finite value >= 0",
        );
        check(
            &mut v,
            p.lifetime_hours.is_finite() && p.lifetime_hours > 0.0,
            at("platform.lifetime_hours"),
            "must be a finite value > 0",
        );
    }
    v
}

/// Operational and embodied emission, gross vs net of renewable offsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionFigure {
    pub gross_kgco2e: f64,
    pub renewable_offset_kgco2e: f64,
    pub net_kgco2e: f64,
}

impl EmissionFigure {
    /// `net = gross − offset`; requires `0 ≤ offset ≤ gross`.
    pub fn new(gross_kgco2e: f64, renewable_offset_kgco2e: f64) -> Result<Self> {
        if !gross_kgco2e.is_finite() || !renewable_offset_kgco2e.is_finite() {
            return Err(Error::NonFinite {
                what: "emission figure".into(),
            });
        }
        if gross_kgco2e < 0.0 {
            return Err(Error::InvalidInput {
                what: format!("gross emission must be >= 0, got {gross_kgco2e}"),
            });
        }
        if renewable_offset_kgco2e < 0.0 || renewable_offset_kgco2e > gross_kgco2e {
            return Err(Error::InvalidInput {
                what: format!(
                    "renewable offset must lie in [0, gross], got {renewable_offset_kgco2e}"
                ),
            });
        }
        Ok(Self {
            gross_kgco2e,
            renewable_offset_kgco2e,
            net_kgco2e: gross_kgco2e - renewable_offset_kgco2e,
        })
    }

    pub fn zero() -> Self {
        Self {
            gross_kgco2e: 0.0,
            renewable_offset_kgco2e: 0.0,
            net_kgco2e: 0.0,
        }
    }
}

/// One phase's accounted figures inside a breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseFigures {
    pub kind: PhaseKind,
    pub operational_energy_kwh: f64,
    pub operational: EmissionFigure,
    pub embodied_kgco2e: f64,
    /// True when per-node attribution hit the whole-lifetime cap.
    pub embodied_capped: bool,
}

/// Per-phase operational energy, operational carbon, and embodied carbon.
/// Totals are derived from the per-phase entries, so the additivity
/// invariant holds by construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CarbonBreakdown {
    pub phases: Vec<PhaseFigures>,
}

impl CarbonBreakdown {
    pub fn total_energy_kwh(&self) -> f64 {
        self.phases.iter().map(|p| p.operational_energy_kwh).sum()
    }

    pub fn total_operational_gross_kgco2e(&self) -> f64 {
        self.phases.iter().map(|p| p.operational.gross_kgco2e).sum()
    }

    pub fn total_renewable_offset_kgco2e(&self) -> f64 {
        self.phases
            .iter()
            .map(|p| p.operational.renewable_offset_kgco2e)
            .sum()
    }

    /// Operational carbon net of renewable offsets.
    pub fn total_operational_kgco2e(&self) -> f64 {
        self.phases.iter().map(|p| p.operational.net_kgco2e).sum()
    }

    pub fn total_embodied_kgco2e(&self) -> f64 {
        self.phases.iter().map(|p| p.embodied_kgco2e).sum()
    }

    /// Net operational plus embodied carbon.
    pub fn total_kgco2e(&self) -> f64 {
        self.total_operational_kgco2e() + self.total_embodied_kgco2e()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gpu() -> HardwarePlatform {
        HardwarePlatform::accelerated("gpu-node", 0.3)
    }

    fn well_formed_task() -> MLTask {
        let series = CarbonIntensitySeries::constant(400.0, AccountingMode::LocationBased).unwrap();
        MLTask::new("ok", series)
            .with_pue(1.1)
            .with_phase(PhaseProfile::new(
                PhaseKind::OfflineTraining,
                gpu(),
                10,
                24.0,
            ))
    }

    #[test]
    fn default_embodied_constants() {
        assert_eq!(gpu().embodied_kgco2e, 2000.0);
        assert_eq!(
            HardwarePlatform::cpu_only("cpu", 0.2).embodied_kgco2e,
            1000.0
        );
    }

    #[test]
    fn recurring_flags() {
        assert!(PhaseKind::OnlineTraining.is_recurring());
        assert!(PhaseKind::Inference.is_recurring());
        assert!(!PhaseKind::OfflineTraining.is_recurring());
        assert!(!PhaseKind::DataStorageIngestion.is_recurring());
        assert!(!PhaseKind::Experimentation.is_recurring());
    }

    #[test]
    fn validate_accepts_well_formed_task() {
        assert!(validate(&well_formed_task()).is_empty());
    }

    #[test]
    fn validate_names_zero_utilization() {
        let mut task = well_formed_task();
        task.phases[0].utilization = 0.0;
        let v = validate(&task);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "phases[0].utilization");
    }

    #[test]
    fn validate_names_sub_unity_pue() {
        let task = well_formed_task().with_pue(0.9);
        let v = validate(&task);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "pue");
    }

    #[test]
    fn series_rejects_unsorted_and_negative() {
        let mode = AccountingMode::LocationBased;
        assert!(CarbonIntensitySeries::new(vec![], mode).is_err());
        assert!(CarbonIntensitySeries::new(vec![(1.0, 10.0), (1.0, 20.0)], mode).is_err());
        assert!(CarbonIntensitySeries::new(vec![(2.0, 10.0), (1.0, 20.0)], mode).is_err());
        assert!(CarbonIntensitySeries::new(vec![(0.0, -1.0)], mode).is_err());
        assert!(CarbonIntensitySeries::new(vec![(0.0, 500.0), (1.0, 100.0)], mode).is_ok());
    }

    #[test]
    fn emission_figure_enforces_net_identity() {
        let e = EmissionFigure::new(10.0, 4.0).unwrap();
        assert_eq!(e.net_kgco2e, 6.0);
        assert!(EmissionFigure::new(10.0, 11.0).is_err());
        assert!(EmissionFigure::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn breakdown_totals_are_sums() {
        let b = CarbonBreakdown {
            phases: vec![
                PhaseFigures {
                    kind: PhaseKind::OfflineTraining,
                    operational_energy_kwh: 10.0,
                    operational: EmissionFigure::new(4.0, 1.0).unwrap(),
                    embodied_kgco2e: 2.0,
                    embodied_capped: false,
                },
                PhaseFigures {
                    kind: PhaseKind::Inference,
                    operational_energy_kwh: 30.0,
                    operational: EmissionFigure::new(12.0, 0.0).unwrap(),
                    embodied_kgco2e: 6.0,
                    embodied_capped: false,
                },
            ],
        };
        assert_eq!(b.total_energy_kwh(), 40.0);
        assert_eq!(b.total_operational_gross_kgco2e(), 16.0);
        assert_eq!(b.total_operational_kgco2e(), 15.0);
        assert_eq!(b.total_embodied_kgco2e(), 8.0);
        assert_eq!(b.total_kgco2e(), 23.0);
    }
}
