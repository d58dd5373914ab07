//! Composes multiplicative efficiency factors across the hardware-software
//! stack and projects fleet-level demand trends including growth rebound.
//!
//! Factors act multiplicatively on operational energy only; embodied deltas
//! from hardware swaps belong to scenario comparisons.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Where in the stack an optimization lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCategory {
    Model,
    Platform,
    Infrastructure,
    Hardware,
}

/// A single energy-efficiency gain. `multiplier` is dimensionless and > 0;
/// 2.0 means the optimized system uses half the energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyFactor {
    pub name: String,
    pub category: FactorCategory,
    pub multiplier: f64,
}

impl EfficiencyFactor {
    pub fn new(name: impl Into<String>, category: FactorCategory, multiplier: f64) -> Self {
        Self {
            name: name.into(),
            category,
            multiplier,
        }
    }

    /// Normalizes a percent-style reduction ("15% less energy") into a
    /// multiplier so the composition law stays uniform: 0.15 → 1/0.85.
    pub fn from_percent_reduction(
        name: impl Into<String>,
        category: FactorCategory,
        reduction: f64,
    ) -> Result<Self> {
        if !reduction.is_finite() || !(0.0..1.0).contains(&reduction) {
            return Err(Error::InvalidInput {
                what: format!("percent reduction must lie in [0, 1), got {reduction}"),
            });
        }
        Ok(Self::new(name, category, 1.0 / (1.0 - reduction)))
    }
}

/// Aggregate multiplier of an optimization chain: the product of all factor
/// multipliers. Order-independent.
pub fn compose(factors: &[EfficiencyFactor]) -> Result<f64> {
    if factors.is_empty() {
        return Err(Error::InvalidInput {
            what: "cannot compose an empty factor list".into(),
        });
    }
    let mut product = 1.0;
    for f in factors {
        if !f.multiplier.is_finite() || f.multiplier <= 0.0 {
            return Err(Error::InvalidInput {
                what: format!(
                    "factor {}: multiplier must be > 0, got {}",
                    f.name, f.multiplier
                ),
            });
        }
        product *= f.multiplier;
    }
    Ok(product)
}

/// The cross-stack optimization chain for the transformer-based universal
/// language-translation service: caching, accelerator deployment, reduced
/// precision, and fused kernels, composing to more than 800×.
pub fn lm_preset() -> Vec<EfficiencyFactor> {
    vec![
        EfficiencyFactor::new("application-level caching", FactorCategory::Platform, 6.7),
        EfficiencyFactor::new("gpu acceleration", FactorCategory::Hardware, 10.1),
        EfficiencyFactor::new("fp16 on accelerator", FactorCategory::Infrastructure, 2.4),
        EfficiencyFactor::new("fused transformer kernels", FactorCategory::Model, 5.0),
    ]
}

/// Looks up a ledger preset by name.
pub fn preset(name: &str) -> Result<Vec<EfficiencyFactor>> {
    match name {
        "lm" => Ok(lm_preset()),
        other => Err(Error::InvalidInput {
            what: format!("unknown ledger preset '{other}' (available: lm)"),
        }),
    }
}

/// Fleet demand trend: repeated per-period efficiency gains compounding
/// against per-period demand growth.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendSpec {
    /// Number of half-year periods to project.
    pub periods: usize,
    /// Fractional energy reduction per period, in [0, 1).
    pub efficiency_per_period: f64,
    /// Demand multiplier per period, ≥ 0. 1.0 means flat demand.
    pub growth_per_period: f64,
}

impl TrendSpec {
    /// Default 20% efficiency gain per half-year, flat demand.
    pub fn new(periods: usize) -> Self {
        Self {
            periods,
            efficiency_per_period: 0.20,
            growth_per_period: 1.0,
        }
    }

    pub fn with_efficiency(mut self, efficiency_per_period: f64) -> Self {
        self.efficiency_per_period = efficiency_per_period;
        self
    }

    pub fn with_growth(mut self, growth_per_period: f64) -> Self {
        self.growth_per_period = growth_per_period;
        self
    }
}

/// Net demand multiplier per period: entry `k` is
/// `(growth × (1 − efficiency))^k` for `k = 0..=periods`.
///
/// Growth above `1/(1 − efficiency)` makes the series rise despite the
/// per-unit gains — efficiency stimulating enough demand to outgrow itself.
pub fn net_trend(spec: &TrendSpec) -> Result<Vec<f64>> {
    if !spec.efficiency_per_period.is_finite() || !(0.0..1.0).contains(&spec.efficiency_per_period)
    {
        return Err(Error::InvalidInput {
            what: format!(
                "efficiency_per_period must lie in [0, 1), got {}",
                spec.efficiency_per_period
            ),
        });
    }
    if !spec.growth_per_period.is_finite() || spec.growth_per_period < 0.0 {
        return Err(Error::InvalidInput {
            what: format!(
                "growth_per_period must be >= 0, got {}",
                spec.growth_per_period
            ),
        });
    }
    let step = spec.growth_per_period * (1.0 - spec.efficiency_per_period);
    Ok((0..=spec.periods).map(|k| step.powi(k as i32)).collect())
}

/// Measured effects of one numeric-precision conversion. Fields are reported
/// only where a calibration exists for that row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizationDelta {
    /// Fractional model-size reduction.
    pub size_reduction: Option<f64>,
    /// Fractional memory-bandwidth reduction.
    pub bandwidth_reduction: Option<f64>,
    /// End-to-end latency speedup factor.
    pub latency_speedup: Option<f64>,
}

impl QuantizationDelta {
    /// The no-op conversion row.
    pub fn identity() -> Self {
        Self {
            size_reduction: Some(0.0),
            bandwidth_reduction: Some(0.0),
            latency_speedup: Some(1.0),
        }
    }
}

/// Calibration table of quantization effects keyed by
/// `(model, bits_from, bits_to)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuantizationTable {
    rows: BTreeMap<(String, u32, u32), QuantizationDelta>,
}

impl QuantizationTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table pre-loaded with the recommendation-model fp32→fp16 calibrations.
    pub fn with_default_calibration() -> Self {
        let mut t = Self::new();
        t.insert(
            "RM1",
            32,
            16,
            QuantizationDelta {
                size_reduction: None,
                bandwidth_reduction: None,
                latency_speedup: Some(2.5),
            },
        );
        t.insert(
            "RM2",
            32,
            16,
            QuantizationDelta {
                size_reduction: Some(0.15),
                bandwidth_reduction: Some(0.207),
                latency_speedup: None,
            },
        );
        t
    }

    pub fn insert(&mut self, model: &str, bits_from: u32, bits_to: u32, delta: QuantizationDelta) {
        self.rows
            .insert((model.to_string(), bits_from, bits_to), delta);
    }

    /// Looks up the calibrated effects of converting `model` from
    /// `bits_from` to `bits_to`. Same-width conversions return the identity
    /// row; pairs without calibration are errors.
    pub fn delta(&self, model: &str, bits_from: u32, bits_to: u32) -> Result<QuantizationDelta> {
        if bits_from == bits_to {
            return Ok(QuantizationDelta::identity());
        }
        self.rows
            .get(&(model.to_string(), bits_from, bits_to))
            .copied()
            .ok_or(Error::NoCalibration {
                model: model.to_string(),
                bits_from,
                bits_to,
            })
    }
}
