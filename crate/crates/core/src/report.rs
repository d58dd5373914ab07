//! JSON report emission with stable key order, plus plot-ready CSV.
//!
//! All figures carry units in their key names. Re-emitting the same result
//! is byte-identical: key order follows struct field order, no timestamps.

use serde::Serialize;

use crate::edgefl::FlEstimate;
use crate::error::{Error, Result};
use crate::ledger::{EfficiencyFactor, QuantizationDelta};
use crate::lifecycle::{embodied_operational_split, equivalence_miles, phase_shares, ShareColumn};
use crate::model::{CarbonBreakdown, MLTask};
use crate::scenario::{PowerLawFit, ScalingPoint, SweepResult};
use crate::sched::{PolicyTradeoff, ScheduleReport};

#[derive(Debug, Clone, Serialize)]
struct PhaseRow {
    phase: &'static str,
    operational_energy_kwh: f64,
    operational_gross_kgco2e: f64,
    renewable_offset_kgco2e: f64,
    operational_net_kgco2e: f64,
    embodied_kgco2e: f64,
    embodied_capped: bool,
}

#[derive(Debug, Clone, Serialize)]
struct Totals {
    operational_energy_kwh: f64,
    operational_gross_kgco2e: f64,
    renewable_offset_kgco2e: f64,
    operational_net_kgco2e: f64,
    embodied_kgco2e: f64,
    total_kgco2e: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Shares {
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operational: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    embodied: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
struct BreakdownReport {
    task: String,
    pue: f64,
    accounting_mode: &'static str,
    renewable_matching: f64,
    phases: Vec<PhaseRow>,
    totals: Totals,
    shares: Shares,
    #[serde(skip_serializing_if = "Option::is_none")]
    embodied_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operational_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    training_inference_split: Option<(f64, f64)>,
    equivalence_miles: f64,
    equivalence_kg_per_mile: f64,
}

fn mode_label(task: &MLTask) -> &'static str {
    match task.intensity.mode() {
        crate::model::AccountingMode::LocationBased => "location_based",
        crate::model::AccountingMode::MarketBased => "market_based",
    }
}

/// Share of net operational carbon between the training side (experimentation
/// plus offline/online training) and inference, ignoring data phases.
/// `None` when that subset has no operational carbon.
pub fn training_inference_split(breakdown: &CarbonBreakdown) -> Option<(f64, f64)> {
    let mut training = 0.0;
    let mut inference = 0.0;
    for p in &breakdown.phases {
        if p.kind.is_training_side() {
            training += p.operational.net_kgco2e;
        } else if p.kind == crate::model::PhaseKind::Inference {
            inference += p.operational.net_kgco2e;
        }
    }
    let total = training + inference;
    if total > 0.0 {
        Some((training / total, inference / total))
    } else {
        None
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out =
        serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

/// Full JSON report for a task footprint.
pub fn emit_breakdown_report(
    task: &MLTask,
    breakdown: &CarbonBreakdown,
    kg_per_mile: f64,
) -> Result<String> {
    let phases: Vec<PhaseRow> = breakdown
        .phases
        .iter()
        .map(|p| PhaseRow {
            phase: p.kind.label(),
            operational_energy_kwh: p.operational_energy_kwh,
            operational_gross_kgco2e: p.operational.gross_kgco2e,
            renewable_offset_kgco2e: p.operational.renewable_offset_kgco2e,
            operational_net_kgco2e: p.operational.net_kgco2e,
            embodied_kgco2e: p.embodied_kgco2e,
            embodied_capped: p.embodied_capped,
        })
        .collect();
    let shares = Shares {
        energy: phase_shares(breakdown, ShareColumn::Energy).ok(),
        operational: phase_shares(breakdown, ShareColumn::Operational).ok(),
        embodied: phase_shares(breakdown, ShareColumn::Embodied).ok(),
        total: phase_shares(breakdown, ShareColumn::Total).ok(),
    };
    let split = embodied_operational_split(breakdown).ok();
    let report = BreakdownReport {
        task: task.name.clone(),
        pue: task.pue,
        accounting_mode: mode_label(task),
        renewable_matching: task.renewable_matching,
        phases,
        totals: Totals {
            operational_energy_kwh: breakdown.total_energy_kwh(),
            operational_gross_kgco2e: breakdown.total_operational_gross_kgco2e(),
            renewable_offset_kgco2e: breakdown.total_renewable_offset_kgco2e(),
            operational_net_kgco2e: breakdown.total_operational_kgco2e(),
            embodied_kgco2e: breakdown.total_embodied_kgco2e(),
            total_kgco2e: breakdown.total_kgco2e(),
        },
        shares,
        embodied_fraction: split.map(|s| s.0),
        operational_fraction: split.map(|s| s.1),
        training_inference_split: training_inference_split(breakdown),
        equivalence_miles: equivalence_miles(breakdown.total_kgco2e(), kg_per_mile)?,
        equivalence_kg_per_mile: kg_per_mile,
    };
    to_json(&report)
}

#[derive(Debug, Clone, Serialize)]
struct SweepReport<'a> {
    task: &'a str,
    axis_label: &'a str,
    points: &'a [crate::scenario::SweepPoint],
}

/// JSON sweep report: one array element per axis value.
pub fn emit_sweep_report(task_name: &str, sweep: &SweepResult) -> Result<String> {
    to_json(&SweepReport {
        task: task_name,
        axis_label: &sweep.axis_label,
        points: &sweep.points,
    })
}

#[derive(Debug, Clone, Serialize)]
struct FactorRow<'a> {
    name: &'a str,
    category: crate::ledger::FactorCategory,
    multiplier: f64,
}

#[derive(Debug, Clone, Serialize)]
struct LedgerReport<'a> {
    task: &'a str,
    factors: Vec<FactorRow<'a>>,
    aggregate_multiplier: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    net_trend: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantization: Option<QuantizationDelta>,
}

pub fn emit_ledger_report(
    task_name: &str,
    factors: &[EfficiencyFactor],
    aggregate: f64,
    trend: Option<&[f64]>,
) -> Result<String> {
    to_json(&LedgerReport {
        task: task_name,
        factors: factors
            .iter()
            .map(|f| FactorRow {
                name: &f.name,
                category: f.category,
                multiplier: f.multiplier,
            })
            .collect(),
        aggregate_multiplier: aggregate,
        net_trend: trend.map(<[f64]>::to_vec),
        quantization: None,
    })
}

#[derive(Debug, Clone, Serialize)]
struct ParetoReport<'a> {
    task: &'a str,
    points: usize,
    frontier: &'a [ScalingPoint],
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<PowerLawFit>,
}

pub fn emit_pareto_report(
    task_name: &str,
    total_points: usize,
    frontier: &[ScalingPoint],
    fit: Option<PowerLawFit>,
) -> Result<String> {
    to_json(&ParetoReport {
        task: task_name,
        points: total_points,
        frontier,
        fit,
    })
}

/// Frontier CSV: `data_scale,model_scale,energy_per_step,quality_error`.
pub fn pareto_csv(frontier: &[ScalingPoint]) -> String {
    let mut out = String::from("data_scale,model_scale,energy_per_step,quality_error\n");
    for p in frontier {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.data_scale, p.model_scale, p.energy_per_step, p.quality_error
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
struct FlReport<'a> {
    task: &'a str,
    #[serde(flatten)]
    estimate: &'a FlEstimate,
}

pub fn emit_fl_report(task_name: &str, estimate: &FlEstimate) -> Result<String> {
    to_json(&FlReport {
        task: task_name,
        estimate,
    })
}

#[derive(Debug, Clone, Serialize)]
struct ScheduleJson<'a> {
    task: &'a str,
    #[serde(flatten)]
    report: &'a ScheduleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    tradeoff_vs_immediate: Option<PolicyTradeoff>,
}

pub fn emit_schedule_report(
    task_name: &str,
    report: &ScheduleReport,
    tradeoff: Option<PolicyTradeoff>,
) -> Result<String> {
    to_json(&ScheduleJson {
        task: task_name,
        report,
        tradeoff_vs_immediate: tradeoff,
    })
}
