//! Aggregates phase-level accounting into task-level breakdowns, computes
//! phase and energy ratios, and converts emissions into report equivalences.

use crate::accounting::{embodied_attribution_fleet, operational_carbon, operational_energy};
use crate::error::{Error, Result};
use crate::model::{validate, CarbonBreakdown, MLTask, PhaseFigures};

/// Default passenger-vehicle emission factor, kgCO₂e per mile driven.
/// A configurable reporting constant, not a measured quantity.
pub const DEFAULT_KG_PER_MILE: f64 = 0.404;

/// Computes the full operational + embodied breakdown for a task.
///
/// Each phase is charged the time-weighted mean intensity over its own
/// reservation window anchored at the series start. Embodied carbon is
/// amortized by reservation time share (`node_count × duration / lifetime`),
/// independent of utilization.
pub fn footprint(task: &MLTask) -> Result<CarbonBreakdown> {
    let violations = validate(task);
    if let Some(v) = violations.first() {
        return Err(Error::InvalidTask {
            phase: v.field.clone(),
            detail: v.rule.clone(),
        });
    }
    let start = task.intensity.start_h();
    let mut phases = Vec::with_capacity(task.phases.len());
    for (i, phase) in task.phases.iter().enumerate() {
        let build = || -> Result<PhaseFigures> {
            let energy = operational_energy(phase, task.pue)?;
            let window = (start, start + phase.duration_hours);
            let operational =
                operational_carbon(energy, &task.intensity, window, task.renewable_matching)?;
            let embodied = embodied_attribution_fleet(
                &phase.platform,
                phase.node_count,
                phase.duration_hours,
                1.0,
            )?;
            Ok(PhaseFigures {
                kind: phase.kind,
                operational_energy_kwh: energy,
                operational,
                embodied_kgco2e: embodied.kgco2e,
                embodied_capped: embodied.capped,
            })
        };
        phases.push(build().map_err(|e| Error::InvalidTask {
            phase: format!("phases[{i}] ({})", phase.kind.label()),
            detail: e.to_string(),
        })?);
    }
    Ok(CarbonBreakdown { phases })
}

/// Which breakdown column a share computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShareColumn {
    /// Operational energy, kWh.
    Energy,
    /// Net operational carbon.
    Operational,
    /// Embodied carbon.
    Embodied,
    /// Net operational + embodied carbon.
    Total,
}

impl ShareColumn {
    pub fn label(self) -> &'static str {
        match self {
            ShareColumn::Energy => "energy",
            ShareColumn::Operational => "operational",
            ShareColumn::Embodied => "embodied",
            ShareColumn::Total => "total",
        }
    }

    fn of(self, p: &PhaseFigures) -> f64 {
        match self {
            ShareColumn::Energy => p.operational_energy_kwh,
            ShareColumn::Operational => p.operational.net_kgco2e,
            ShareColumn::Embodied => p.embodied_kgco2e,
            ShareColumn::Total => p.operational.net_kgco2e + p.embodied_kgco2e,
        }
    }
}

/// Per-phase fractions of one column; fractions sum to 1.
pub fn phase_shares(breakdown: &CarbonBreakdown, column: ShareColumn) -> Result<Vec<f64>> {
    let total: f64 = breakdown.phases.iter().map(|p| column.of(p)).sum();
    if total <= 0.0 {
        return Err(Error::EmptyBreakdown {
            column: column.label(),
        });
    }
    Ok(breakdown
        .phases
        .iter()
        .map(|p| column.of(p) / total)
        .collect())
}

/// `(embodied_fraction, operational_fraction)` of the total carbon, where
/// operational is net of renewable offsets. The two fractions sum to 1.
pub fn embodied_operational_split(breakdown: &CarbonBreakdown) -> Result<(f64, f64)> {
    let embodied = breakdown.total_embodied_kgco2e();
    let operational = breakdown.total_operational_kgco2e();
    let total = embodied + operational;
    if total <= 0.0 {
        return Err(Error::EmptyBreakdown { column: "total" });
    }
    Ok((embodied / total, operational / total))
}

/// Miles-driven equivalent of an emission figure.
pub fn equivalence_miles(carbon_kgco2e: f64, kg_per_mile: f64) -> Result<f64> {
    if !carbon_kgco2e.is_finite() || !kg_per_mile.is_finite() {
        return Err(Error::NonFinite {
            what: "equivalence input".into(),
        });
    }
    if carbon_kgco2e < 0.0 {
        return Err(Error::InvalidInput {
            what: format!("carbon must be >= 0 kg, got {carbon_kgco2e}"),
        });
    }
    if kg_per_mile <= 0.0 {
        return Err(Error::InvalidInput {
            what: format!("kg_per_mile must be > 0, got {kg_per_mile}"),
        });
    }
    Ok(carbon_kgco2e / kg_per_mile)
}
