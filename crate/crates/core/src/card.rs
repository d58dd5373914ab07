//! Markdown carbon-impact model cards.
//!
//! A card states the footprint, the assumptions behind it, a report
//! equivalence, and provenance. Regenerating a card from unchanged inputs is
//! byte-identical; zero footprints print explicit zeros, never blanks.

use std::fmt::Write as _;

use crate::error::Result;
use crate::lifecycle::equivalence_miles;
use crate::model::{AccountingMode, CarbonBreakdown, HardwarePlatform, MLTask};
use crate::report::training_inference_split;

/// Provenance lines recorded at the bottom of a card.
#[derive(Debug, Clone, Default)]
pub struct CardProvenance {
    /// SHA-256 of the config file the card was built from.
    pub config_digest: Option<String>,
    /// Toolkit version string.
    pub version: String,
}

fn fmt_kg(v: f64) -> String {
    format!("{v:.3}")
}

fn fmt_kwh(v: f64) -> String {
    format!("{v:.3}")
}

fn fmt_pct(v: f64) -> String {
    format!("{:.1}%", v * 100.0)
}

fn mode_name(mode: AccountingMode) -> &'static str {
    match mode {
        AccountingMode::LocationBased => "location-based",
        AccountingMode::MarketBased => "market-based",
    }
}

fn mean_intensity_line(task: &MLTask) -> String {
    let samples = task.intensity.samples();
    if samples.len() == 1 {
        format!("constant {} gCO2e/kWh", samples[0].g_per_kwh)
    } else {
        format!(
            "{}-sample trace over [{} h, {} h]",
            samples.len(),
            task.intensity.start_h(),
            task.intensity.end_h()
        )
    }
}

/// Renders the carbon-impact model card for a task and its computed
/// breakdown.
pub fn emit_model_card(
    task: &MLTask,
    breakdown: &CarbonBreakdown,
    kg_per_mile: f64,
    provenance: &CardProvenance,
) -> Result<String> {
    let total = breakdown.total_kgco2e();
    let miles = equivalence_miles(total, kg_per_mile)?;
    let mut out = String::new();

    let _ = writeln!(out, "# Carbon impact: {}", task.name);
    let _ = writeln!(out);
    let _ = writeln!(out, "## Footprint");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "| Phase | Energy (kWh) | Operational gross (kgCO2e) | Renewable offset (kgCO2e) | Operational net (kgCO2e) | Embodied (kgCO2e) |"
    );
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    for p in &breakdown.phases {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            p.kind.label(),
            fmt_kwh(p.operational_energy_kwh),
            fmt_kg(p.operational.gross_kgco2e),
            fmt_kg(p.operational.renewable_offset_kgco2e),
            fmt_kg(p.operational.net_kgco2e),
            fmt_kg(p.embodied_kgco2e),
        );
    }
    let _ = writeln!(
        out,
        "| **total** | {} | {} | {} | {} | {} |",
        fmt_kwh(breakdown.total_energy_kwh()),
        fmt_kg(breakdown.total_operational_gross_kgco2e()),
        fmt_kg(breakdown.total_renewable_offset_kgco2e()),
        fmt_kg(breakdown.total_operational_kgco2e()),
        fmt_kg(breakdown.total_embodied_kgco2e()),
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "Overall footprint: **{} kgCO2e** ({} kWh of electricity; {} operational net + {} embodied).",
        fmt_kg(total),
        fmt_kwh(breakdown.total_energy_kwh()),
        fmt_kg(breakdown.total_operational_kgco2e()),
        fmt_kg(breakdown.total_embodied_kgco2e()),
    );
    if let Some((train, infer)) = training_inference_split(breakdown) {
        let _ = writeln!(
            out,
            "Training vs inference (operational, net): {} / {}.",
            fmt_pct(train),
            fmt_pct(infer)
        );
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "## Assumptions");
    let _ = writeln!(out);
    let _ = writeln!(out, "- PUE: {}", task.pue);
    let _ = writeln!(
        out,
        "- Grid intensity: {} ({} accounting)",
        mean_intensity_line(task),
        mode_name(task.intensity.mode())
    );
    let _ = writeln!(
        out,
        "- Renewable matching: {} of consumed energy",
        fmt_pct(task.renewable_matching)
    );
    let mut seen: Vec<&HardwarePlatform> = Vec::new();
    for phase in &task.phases {
        if !seen.iter().any(|p| **p == phase.platform) {
            seen.push(&phase.platform);
        }
    }
    for p in seen {
        let _ = writeln!(
            out,
            "- Platform {}: {} kW/node, {} kgCO2e embodied, {} h lifetime, {}",
            p.name,
            p.device_power_kw,
            p.embodied_kgco2e,
            p.lifetime_hours,
            if p.accelerated {
                "accelerated"
            } else {
                "cpu-only"
            },
        );
    }
    let _ = writeln!(
        out,
        "- Embodied carbon amortized linearly by reservation share of node lifetime"
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "## Equivalence");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "- {} kgCO2e is equivalent to {:.0} miles driven by an average passenger vehicle (at {} kgCO2e/mile).",
        fmt_kg(total),
        miles,
        kg_per_mile
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "## Provenance");
    let _ = writeln!(out);
    let _ = writeln!(out, "- Generated by aicarbon {}", provenance.version);
    match &provenance.config_digest {
        Some(digest) => {
            let _ = writeln!(out, "- Config digest (sha256): {digest}");
        }
        None => {
            let _ = writeln!(out, "- Config digest (sha256): none (in-memory task)");
        }
    }
    let _ = writeln!(out, "- Phase count: {}", task.phases.len());
    Ok(out)
}
