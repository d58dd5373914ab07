//! The formula core: operational energy, operational carbon under
//! location/market accounting with renewable matching, and amortized
//! embodied carbon.
//!
//! All functions are pure over immutable inputs and callable concurrently
//! without coordination.

use crate::error::{Error, Result};
use crate::model::{
    AccountingMode, CarbonIntensitySeries, EmissionFigure, HardwarePlatform, PhaseProfile,
};

/// Total facility energy for one phase reservation, kWh:
/// `device_power × node_count × duration × pue`.
pub fn operational_energy(phase: &PhaseProfile, pue: f64) -> Result<f64> {
    if !phase.platform.device_power_kw.is_finite()
        || !phase.duration_hours.is_finite()
        || !pue.is_finite()
    {
        return Err(Error::NonFinite {
            what: "operational_energy input".into(),
        });
    }
    if pue < 1.0 {
        return Err(Error::InvalidInput {
            what: format!("pue must be >= 1.0, got {pue}"),
        });
    }
    if phase.duration_hours < 0.0 || phase.platform.device_power_kw <= 0.0 {
        return Err(Error::InvalidInput {
            what: "phase requires duration >= 0 and device power > 0".into(),
        });
    }
    Ok(phase.platform.device_power_kw * f64::from(phase.node_count) * phase.duration_hours * pue)
}

/// Time-weighted step-function average of the series over `(start_h, end_h)`,
/// gCO₂e/kWh.
///
/// The series is a right-continuous step function: each sample's value holds
/// until the next sample, and the last value extends indefinitely. The window
/// is clamped to start no earlier than the first sample; a window that ends
/// before the first sample has no coverage. A degenerate window
/// (`start == end`) evaluates the step function at that instant.
pub fn mean_intensity(series: &CarbonIntensitySeries, window: (f64, f64)) -> Result<f64> {
    let (start, end) = window;
    if !start.is_finite() || !end.is_finite() {
        return Err(Error::NonFinite {
            what: "intensity window".into(),
        });
    }
    if end < start {
        return Err(Error::InvalidInput {
            what: format!("window start {start} h exceeds end {end} h"),
        });
    }
    let samples = series.samples();
    let first = samples[0].time_h;
    if end < first {
        return Err(Error::NoIntensityCoverage {
            start_h: start,
            end_h: end,
        });
    }
    let lo = start.max(first);
    if end <= lo {
        // Degenerate window: the step value at that instant.
        return Ok(value_at(series, lo));
    }
    let mut integral = 0.0;
    for (i, s) in samples.iter().enumerate() {
        let seg_start = s.time_h;
        let seg_end = samples.get(i + 1).map_or(f64::INFINITY, |n| n.time_h);
        let a = seg_start.max(lo);
        let b = seg_end.min(end);
        if b > a {
            integral += s.g_per_kwh * (b - a);
        }
    }
    Ok(integral / (end - lo))
}

/// Step-function value at time `t_h` (clamped to the series start).
fn value_at(series: &CarbonIntensitySeries, t_h: f64) -> f64 {
    let samples = series.samples();
    let mut v = samples[0].g_per_kwh;
    for s in samples {
        if s.time_h <= t_h {
            v = s.g_per_kwh;
        } else {
            break;
        }
    }
    v
}

/// Operational carbon for `energy_kwh` drawn over `window`, kgCO₂e.
///
/// Gross carbon is energy times the time-weighted mean intensity over the
/// window. Under market-based accounting, `renewable_matching` of the gross
/// is offset; location-based results are invariant to matching.
pub fn operational_carbon(
    energy_kwh: f64,
    intensity: &CarbonIntensitySeries,
    window: (f64, f64),
    renewable_matching: f64,
) -> Result<EmissionFigure> {
    if !energy_kwh.is_finite() || !renewable_matching.is_finite() {
        return Err(Error::NonFinite {
            what: "operational_carbon input".into(),
        });
    }
    if energy_kwh < 0.0 {
        return Err(Error::InvalidInput {
            what: format!("energy must be >= 0 kWh, got {energy_kwh}"),
        });
    }
    if !(0.0..=1.0).contains(&renewable_matching) {
        return Err(Error::InvalidInput {
            what: format!("renewable matching must lie in [0, 1], got {renewable_matching}"),
        });
    }
    let mean = mean_intensity(intensity, window)?;
    let gross = energy_kwh * mean / 1000.0;
    let offset = match intensity.mode() {
        AccountingMode::MarketBased => gross * renewable_matching,
        AccountingMode::LocationBased => 0.0,
    };
    EmissionFigure::new(gross, offset)
}

/// Embodied carbon attributed to a reservation, with the per-node
/// whole-lifetime cap noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attribution {
    pub kgco2e: f64,
    /// True when the reservation exceeded a node lifetime and attribution was
    /// capped at the full embodied carbon.
    pub capped: bool,
}

/// Linear amortization of embodied carbon by reservation time share:
/// `embodied × (node_hours / lifetime) × exclusive_share`, for hours reserved
/// on a single node.
///
/// Attribution never exceeds the node's full embodied carbon: reservations
/// longer than the lifetime are capped and flagged rather than rejected.
pub fn embodied_attribution(
    platform: &HardwarePlatform,
    node_hours: f64,
    exclusive_share: f64,
) -> Result<Attribution> {
    if !node_hours.is_finite() || !exclusive_share.is_finite() {
        return Err(Error::NonFinite {
            what: "embodied_attribution input".into(),
        });
    }
    if node_hours < 0.0 {
        return Err(Error::InvalidInput {
            what: format!("node_hours must be >= 0, got {node_hours}"),
        });
    }
    if !(0.0..=1.0).contains(&exclusive_share) {
        return Err(Error::InvalidInput {
            what: format!("exclusive_share must lie in [0, 1], got {exclusive_share}"),
        });
    }
    if platform.lifetime_hours <= 0.0 || !platform.lifetime_hours.is_finite() {
        return Err(Error::InvalidInput {
            what: format!(
                "platform {} lifetime must be a finite value > 0",
                platform.name
            ),
        });
    }
    let ratio = node_hours / platform.lifetime_hours;
    Ok(Attribution {
        kgco2e: platform.embodied_kgco2e * ratio.min(1.0) * exclusive_share,
        capped: ratio > 1.0,
    })
}

/// Embodied attribution for a fleet reservation of `node_count` nodes over a
/// common wall-clock duration. The whole-lifetime cap applies per node, so a
/// fleet's total node-hours may exceed one lifetime without capping.
pub fn embodied_attribution_fleet(
    platform: &HardwarePlatform,
    node_count: u32,
    duration_hours: f64,
    exclusive_share: f64,
) -> Result<Attribution> {
    let per_node = embodied_attribution(platform, duration_hours, exclusive_share)?;
    Ok(Attribution {
        kgco2e: per_node.kgco2e * f64::from(node_count),
        capped: per_node.capped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PhaseKind, PhaseProfile};
    use proptest::prelude::*;

    fn phase(power_kw: f64, nodes: u32, hours: f64) -> PhaseProfile {
        PhaseProfile::new(
            PhaseKind::OfflineTraining,
            HardwarePlatform::accelerated("gpu", power_kw),
            nodes,
            hours,
        )
    }

    fn constant(v: f64, mode: AccountingMode) -> CarbonIntensitySeries {
        CarbonIntensitySeries::constant(v, mode).unwrap()
    }

    #[test]
    fn energy_matches_hand_computed_product() {
        // 10 nodes × 0.3 kW × 24 h at PUE 1.1.
        let e = operational_energy(&phase(0.3, 10, 24.0), 1.1).unwrap();
        assert!((e - 79.2).abs() < 1e-9, "{e}");
    }

    #[test]
    fn energy_zero_duration_is_zero() {
        assert_eq!(operational_energy(&phase(0.3, 10, 0.0), 1.1).unwrap(), 0.0);
    }

    #[test]
    fn energy_identity_case() {
        assert_eq!(operational_energy(&phase(1.0, 1, 1.0), 1.0).unwrap(), 1.0);
    }

    #[test]
    fn energy_rejects_non_finite() {
        assert!(operational_energy(&phase(f64::NAN, 1, 1.0), 1.0).is_err());
        assert!(operational_energy(&phase(1.0, 1, f64::INFINITY), 1.0).is_err());
        assert!(operational_energy(&phase(1.0, 1, 1.0), f64::NAN).is_err());
    }

    #[test]
    fn carbon_constant_series() {
        let s = constant(400.0, AccountingMode::LocationBased);
        let e = operational_carbon(79.2, &s, (0.0, 24.0), 0.0).unwrap();
        assert!((e.gross_kgco2e - 31.68).abs() < 1e-9);
        assert_eq!(e.net_kgco2e, e.gross_kgco2e);
    }

    #[test]
    fn carbon_full_matching_zeroes_net() {
        let s = constant(400.0, AccountingMode::MarketBased);
        let e = operational_carbon(123.4, &s, (0.0, 10.0), 1.0).unwrap();
        assert_eq!(e.net_kgco2e, 0.0);
        assert_eq!(e.renewable_offset_kgco2e, e.gross_kgco2e);
    }

    #[test]
    fn carbon_two_step_window() {
        // 100 kWh over 1 h at 100 g/kWh then 1 h at 300 g/kWh → 20 kg gross.
        let s = CarbonIntensitySeries::new(
            vec![(0.0, 100.0), (1.0, 300.0)],
            AccountingMode::LocationBased,
        )
        .unwrap();
        let e = operational_carbon(100.0, &s, (0.0, 2.0), 0.0).unwrap();
        assert!((e.gross_kgco2e - 20.0).abs() < 1e-9);
    }

    #[test]
    fn carbon_location_mode_ignores_matching() {
        let s = constant(400.0, AccountingMode::LocationBased);
        let a = operational_carbon(50.0, &s, (0.0, 1.0), 0.0).unwrap();
        let b = operational_carbon(50.0, &s, (0.0, 1.0), 0.9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_constant_over_any_window() {
        let s = constant(400.0, AccountingMode::LocationBased);
        assert_eq!(mean_intensity(&s, (0.0, 5.0)).unwrap(), 400.0);
        assert_eq!(mean_intensity(&s, (100.0, 200.0)).unwrap(), 400.0);
    }

    #[test]
    fn mean_weighted_steps() {
        let s = CarbonIntensitySeries::new(
            vec![(0.0, 500.0), (1.0, 100.0)],
            AccountingMode::LocationBased,
        )
        .unwrap();
        assert!((mean_intensity(&s, (0.0, 2.0)).unwrap() - 300.0).abs() < 1e-12);
        // Window covering exactly one step.
        assert_eq!(mean_intensity(&s, (0.0, 1.0)).unwrap(), 500.0);
        assert_eq!(mean_intensity(&s, (1.0, 2.0)).unwrap(), 100.0);
    }

    #[test]
    fn mean_rejects_empty_overlap() {
        let s =
            CarbonIntensitySeries::new(vec![(10.0, 500.0)], AccountingMode::LocationBased).unwrap();
        assert!(matches!(
            mean_intensity(&s, (0.0, 5.0)),
            Err(Error::NoIntensityCoverage { .. })
        ));
    }

    #[test]
    fn mean_degenerate_window_is_point_value() {
        let s = CarbonIntensitySeries::new(
            vec![(0.0, 500.0), (1.0, 100.0)],
            AccountingMode::LocationBased,
        )
        .unwrap();
        assert_eq!(mean_intensity(&s, (0.5, 0.5)).unwrap(), 500.0);
        assert_eq!(mean_intensity(&s, (1.0, 1.0)).unwrap(), 100.0);
    }

    #[test]
    fn attribution_hand_computed_ratio() {
        // 2000 kg node, 4-year (35,040 h) lifetime, 8,760 exclusive node-hours.
        let p = HardwarePlatform::accelerated("gpu", 0.3);
        let a = embodied_attribution(&p, 8760.0, 1.0).unwrap();
        assert!((a.kgco2e - 500.0).abs() < 1e-9);
        assert!(!a.capped);
    }

    #[test]
    fn attribution_whole_life_conserves() {
        let p = HardwarePlatform::accelerated("gpu", 0.3);
        let a = embodied_attribution(&p, p.lifetime_hours, 1.0).unwrap();
        assert_eq!(a.kgco2e, p.embodied_kgco2e);
        assert!(!a.capped);
    }

    #[test]
    fn attribution_zero_hours() {
        let p = HardwarePlatform::accelerated("gpu", 0.3);
        assert_eq!(embodied_attribution(&p, 0.0, 1.0).unwrap().kgco2e, 0.0);
    }

    #[test]
    fn attribution_caps_past_lifetime() {
        let p = HardwarePlatform::accelerated("gpu", 0.3);
        let a = embodied_attribution(&p, p.lifetime_hours * 3.0, 1.0).unwrap();
        assert_eq!(a.kgco2e, p.embodied_kgco2e);
        assert!(a.capped);
    }

    #[test]
    fn fleet_attribution_caps_per_node() {
        let p = HardwarePlatform::accelerated("gpu", 0.3);
        // 4 nodes for half a lifetime: 2 lifetimes of node-hours, no cap.
        let a = embodied_attribution_fleet(&p, 4, p.lifetime_hours / 2.0, 1.0).unwrap();
        assert!((a.kgco2e - 2.0 * p.embodied_kgco2e).abs() < 1e-9);
        assert!(!a.capped);
    }

    proptest! {
        // Linearity of operational energy in node count, duration, and power.
        #[test]
        fn energy_scales_linearly(
            power in 0.01f64..10.0,
            nodes in 1u32..500,
            hours in 0.0f64..10_000.0,
            mult in 1u32..8,
        ) {
            let base = operational_energy(&phase(power, nodes, hours), 1.1).unwrap();
            let scaled_nodes =
                operational_energy(&phase(power, nodes * mult, hours), 1.1).unwrap();
            let scaled_hours =
                operational_energy(&phase(power, nodes, hours * f64::from(mult)), 1.1).unwrap();
            let scaled_power =
                operational_energy(&phase(power * f64::from(mult), nodes, hours), 1.1).unwrap();
            let m = f64::from(mult);
            prop_assert!((scaled_nodes - base * m).abs() <= 1e-9 * base.max(1.0) * m);
            prop_assert!((scaled_hours - base * m).abs() <= 1e-9 * base.max(1.0) * m);
            prop_assert!((scaled_power - base * m).abs() <= 1e-9 * base.max(1.0) * m);
        }

        // Gross carbon is non-decreasing in energy and in every intensity sample.
        #[test]
        fn carbon_monotone(
            e1 in 0.0f64..1000.0,
            bump in 0.0f64..1000.0,
            v1 in 0.0f64..900.0,
            v2 in 0.0f64..900.0,
            raise in 0.0f64..200.0,
        ) {
            let mode = AccountingMode::LocationBased;
            let s = CarbonIntensitySeries::new(vec![(0.0, v1), (1.0, v2)], mode).unwrap();
            let sr =
                CarbonIntensitySeries::new(vec![(0.0, v1 + raise), (1.0, v2)], mode).unwrap();
            let w = (0.0, 2.0);
            let base = operational_carbon(e1, &s, w, 0.0).unwrap().gross_kgco2e;
            let more_energy = operational_carbon(e1 + bump, &s, w, 0.0).unwrap().gross_kgco2e;
            let hotter = operational_carbon(e1, &sr, w, 0.0).unwrap().gross_kgco2e;
            prop_assert!(more_energy >= base);
            prop_assert!(hotter >= base);
        }

        // Market-based net = gross × (1 − matching).
        #[test]
        fn market_mode_scales_net(energy in 0.0f64..1000.0, m in 0.0f64..=1.0) {
            let s = constant(400.0, AccountingMode::MarketBased);
            let e = operational_carbon(energy, &s, (0.0, 1.0), m).unwrap();
            prop_assert!((e.net_kgco2e - e.gross_kgco2e * (1.0 - m)).abs() <= 1e-9);
        }

        // Disjoint reservations covering a full lifetime attribute exactly the
        // platform's embodied carbon.
        #[test]
        fn attribution_conserves_over_partitions(cuts in proptest::collection::vec(0.0f64..1.0, 0..12)) {
            let p = HardwarePlatform::accelerated("gpu", 0.3);
            let mut points: Vec<f64> = cuts.iter().map(|c| c * p.lifetime_hours).collect();
            points.push(0.0);
            points.push(p.lifetime_hours);
            points.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let total: f64 = points
                .windows(2)
                .map(|w| embodied_attribution(&p, w[1] - w[0], 1.0).unwrap().kgco2e)
                .sum();
            prop_assert!((total - p.embodied_kgco2e).abs() <= 1e-9 * p.embodied_kgco2e);
        }
    }
}
