//! What-if engine: utilization sweeps, renewable-fraction sweeps, and the
//! data/model scaling energy Pareto analysis with power-law fitting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::CarbonBreakdown;

/// One evaluated point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub axis: f64,
    pub operational_energy_kwh: f64,
    pub operational_kgco2e: f64,
    pub embodied_kgco2e: f64,
    pub total_kgco2e: f64,
    pub ratio_to_baseline: f64,
}

/// Sweep output: one row per axis value, each with breakdown totals and the
/// ratio to the baseline total. The ratio at the baseline point is 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis_label: String,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Plot-ready CSV: `axis,operational_kgco2e,embodied_kgco2e,total_kgco2e,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("axis,operational_kgco2e,embodied_kgco2e,total_kgco2e,ratio\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.axis,
                p.operational_kgco2e,
                p.embodied_kgco2e,
                p.total_kgco2e,
                p.ratio_to_baseline
            ));
        }
        out
    }
}

struct BaselineTotals {
    energy: f64,
    operational: f64,
    embodied: f64,
    total: f64,
}

fn baseline_totals(breakdown: &CarbonBreakdown) -> BaselineTotals {
    BaselineTotals {
        energy: breakdown.total_energy_kwh(),
        operational: breakdown.total_operational_kgco2e(),
        embodied: breakdown.total_embodied_kgco2e(),
        total: breakdown.total_kgco2e(),
    }
}

/// Fixed-work utilization sweep.
///
/// Raising utilization from `u0` to `u` shrinks the node-hours needed for the
/// same useful work by `u0/u`, so operational and embodied totals both scale
/// by `u0/u`. The conservation law `ratio(u) × u = u0` holds exactly.
pub fn utilization_sweep(
    baseline: &CarbonBreakdown,
    u0: f64,
    targets: &[f64],
) -> Result<SweepResult> {
    if !u0.is_finite() || u0 <= 0.0 || u0 > 1.0 {
        return Err(Error::InvalidInput {
            what: format!("baseline utilization must lie in (0, 1], got {u0}"),
        });
    }
    let b = baseline_totals(baseline);
    let mut points = Vec::with_capacity(targets.len());
    for &u in targets {
        if !u.is_finite() || u <= 0.0 || u > 1.0 {
            return Err(Error::InvalidInput {
                what: format!("target utilization must lie in (0, 1], got {u}"),
            });
        }
        let scale = u0 / u;
        points.push(SweepPoint {
            axis: u,
            operational_energy_kwh: b.energy * scale,
            operational_kgco2e: b.operational * scale,
            embodied_kgco2e: b.embodied * scale,
            total_kgco2e: b.total * scale,
            ratio_to_baseline: scale,
        });
    }
    Ok(SweepResult {
        axis_label: "utilization".into(),
        points,
    })
}

/// Renewable-matching sweep under market-based accounting.
///
/// The baseline's net operational carbon scales by `(1 − r)`; embodied carbon
/// is untouched, so at full matching the embodied share is all that remains.
/// The total is affine in `r` with slope `−operational`.
pub fn renewable_sweep(baseline: &CarbonBreakdown, fractions: &[f64]) -> Result<SweepResult> {
    let b = baseline_totals(baseline);
    let mut points = Vec::with_capacity(fractions.len());
    for &r in fractions {
        if !r.is_finite() || !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidInput {
                what: format!("renewable fraction must lie in [0, 1], got {r}"),
            });
        }
        let operational = b.operational * (1.0 - r);
        let total = operational + b.embodied;
        points.push(SweepPoint {
            axis: r,
            operational_energy_kwh: b.energy,
            operational_kgco2e: operational,
            embodied_kgco2e: b.embodied,
            total_kgco2e: total,
            ratio_to_baseline: if b.total > 0.0 { total / b.total } else { 1.0 },
        });
    }
    Ok(SweepResult {
        axis_label: "renewable_fraction".into(),
        points,
    })
}

/// One (energy, quality) measurement from a data/model scaling run.
/// `quality_error` is a normalized error metric — lower is better — so the
/// frontier minimizes both coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub data_scale: f64,
    pub model_scale: f64,
    pub energy_per_step: f64,
    pub quality_error: f64,
}

impl ScalingPoint {
    pub fn new(
        data_scale: f64,
        model_scale: f64,
        energy_per_step: f64,
        quality_error: f64,
    ) -> Self {
        Self {
            data_scale,
            model_scale,
            energy_per_step,
            quality_error,
        }
    }
}

/// The non-dominated set under (energy ↓, error ↓), in input order.
/// Duplicate coordinates keep only their first occurrence.
///
/// Sort-and-scan: after ordering by (energy, error, input index), a point is
/// on the frontier iff its error is strictly below every earlier error.
pub fn pareto_frontier(points: &[ScalingPoint]) -> Vec<ScalingPoint> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .energy_per_step
            .total_cmp(&points[b].energy_per_step)
            .then(points[a].quality_error.total_cmp(&points[b].quality_error))
            .then(a.cmp(&b))
    });
    let mut keep = vec![false; points.len()];
    let mut best_error = f64::INFINITY;
    for &i in &order {
        if points[i].quality_error < best_error {
            keep[i] = true;
            best_error = points[i].quality_error;
        }
    }
    points
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(p, _)| *p)
        .collect()
}

/// Least-squares power-law fit `quality_error = coefficient × energy^(−exponent)`
/// in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub coefficient: f64,
    pub exponent: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
}

pub fn powerlaw_fit(points: &[ScalingPoint]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::InvalidInput {
            what: format!(
                "power-law fit requires at least 2 points, got {}",
                points.len()
            ),
        });
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        if !(p.energy_per_step > 0.0 && p.quality_error > 0.0)
            || !p.energy_per_step.is_finite()
            || !p.quality_error.is_finite()
        {
            return Err(Error::InvalidInput {
                what: "power-law fit requires strictly positive finite points".into(),
            });
        }
        xs.push(p.energy_per_step.ln());
        ys.push(p.quality_error.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput {
            what: "power-law fit requires at least two distinct energies".into(),
        });
    }
    let slope = sxy / sxx;
    let exponent = -slope;
    let intercept = my - slope * mx;
    let residual: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(PowerLawFit {
        coefficient: intercept.exp(),
        exponent,
        residual,
    })
}

/// Energy ratio and quality delta of choosing measurement `a` over `b`:
/// `energy_ratio = b.energy / a.energy` (how many times more energy `b`
/// uses), `error_delta = a.error − b.error` (the quality given up).
pub fn compare_scaling(a: &ScalingPoint, b: &ScalingPoint) -> (f64, f64) {
    (
        b.energy_per_step / a.energy_per_step,
        a.quality_error - b.quality_error,
    )
}

const EXAMPLE_LAW_COEFFICIENT: f64 = 0.964;
const EXAMPLE_LAW_EXPONENT: f64 = 0.003;

fn example_error(energy: f64) -> f64 {
    EXAMPLE_LAW_COEFFICIENT * energy.powf(-EXAMPLE_LAW_EXPONENT)
}

/// Illustrative recommendation-model scaling dataset.
///
/// The tandem data+model scaling points form the energy-optimal frontier and
/// follow a diminishing power law with a very small exponent; single-axis
/// scaling points sit above it. Energies are in relative units — the dataset
/// illustrates the measurement shape, it is not production telemetry.
pub fn example_scaling_dataset() -> Vec<ScalingPoint> {
    let tandem = [
        (1.0, 1.0, 0.5),
        (2.0, 2.0, 1.0),
        (4.0, 4.0, 2.0),
        (8.0, 16.0, 4.0),
        (16.0, 32.0, 8.0),
        (32.0, 64.0, 16.0),
    ];
    let mut points: Vec<ScalingPoint> = tandem
        .iter()
        .map(|&(d, m, e)| ScalingPoint::new(d, m, e, example_error(e)))
        .collect();
    // Off-frontier points: scaling one axis alone buys less quality per joule.
    points.push(ScalingPoint::new(
        2.0,
        4.0,
        1.5,
        example_error(1.0) + 0.0025,
    ));
    points.push(ScalingPoint::new(
        4.0,
        2.0,
        1.5,
        example_error(1.0) + 0.0060,
    ));
    points.push(ScalingPoint::new(
        4.0,
        8.0,
        3.0,
        example_error(2.0) + 0.0021,
    ));
    points.push(ScalingPoint::new(
        8.0,
        8.0,
        6.0,
        example_error(4.0) + 0.0018,
    ));
    points.push(ScalingPoint::new(
        16.0,
        16.0,
        12.0,
        example_error(8.0) + 0.0027,
    ));
    points
}

/// The two highlighted energy-optimal settings from the example dataset:
/// the frugal (2× data, 2× model) point and the quality-optimal
/// (8× data, 16× model) point. The second uses roughly 4× the energy for a
/// quality gain of about 0.004.
pub fn example_stars() -> (ScalingPoint, ScalingPoint) {
    let frugal = ScalingPoint::new(2.0, 2.0, 1.0, example_error(1.0));
    let quality = ScalingPoint::new(8.0, 16.0, 4.0, example_error(4.0));
    (frugal, quality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EmissionFigure, PhaseFigures, PhaseKind};
    use proptest::prelude::*;

    fn breakdown(operational: f64, embodied: f64) -> CarbonBreakdown {
        CarbonBreakdown {
            phases: vec![PhaseFigures {
                kind: PhaseKind::OfflineTraining,
                operational_energy_kwh: operational * 2.5,
                operational: EmissionFigure::new(operational, 0.0).unwrap(),
                embodied_kgco2e: embodied,
                embodied_capped: false,
            }],
        }
    }

    #[test]
    fn utilization_three_x_reduction_at_80() {
        let base = breakdown(70.0, 30.0);
        let sweep = utilization_sweep(&base, 0.267, &[0.80]).unwrap();
        let ratio = sweep.points[0].ratio_to_baseline;
        assert!((ratio - 1.0 / 3.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn utilization_identity_and_linear() {
        let base = breakdown(70.0, 30.0);
        let sweep = utilization_sweep(&base, 0.4, &[0.4, 0.8]).unwrap();
        assert_eq!(sweep.points[0].ratio_to_baseline, 1.0);
        assert!((sweep.points[1].ratio_to_baseline - 0.5).abs() < 1e-15);
    }

    #[test]
    fn utilization_rejects_zero_target() {
        let base = breakdown(70.0, 30.0);
        assert!(utilization_sweep(&base, 0.4, &[0.0]).is_err());
        assert!(utilization_sweep(&base, 0.0, &[0.5]).is_err());
    }

    #[test]
    fn utilization_conservation_law() {
        let base = breakdown(70.0, 30.0);
        let targets: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        let sweep = utilization_sweep(&base, 0.267, &targets).unwrap();
        for p in &sweep.points {
            assert!((p.ratio_to_baseline * p.axis - 0.267).abs() <= 1e-12);
        }
    }

    #[test]
    fn renewable_crosses_half_at_five_sevenths() {
        let base = breakdown(70.0, 30.0);
        let sweep = renewable_sweep(&base, &[0.0, 5.0 / 7.0, 1.0]).unwrap();
        assert_eq!(sweep.points[0].ratio_to_baseline, 1.0);
        assert!((sweep.points[1].ratio_to_baseline - 0.5).abs() <= 1e-12);
        // Full matching leaves only the embodied share.
        assert!((sweep.points[2].ratio_to_baseline - 0.30).abs() <= 1e-12);
    }

    #[test]
    fn renewable_affine_in_fraction() {
        let base = breakdown(64.0, 16.0);
        let fractions: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let sweep = renewable_sweep(&base, &fractions).unwrap();
        let op_share = 64.0 / 80.0;
        for p in &sweep.points {
            let expect = 1.0 - op_share * p.axis;
            assert!((p.ratio_to_baseline - expect).abs() <= 1e-12);
        }
    }

    #[test]
    fn frontier_drops_dominated_point() {
        let pts = vec![
            ScalingPoint::new(1.0, 1.0, 1.0, 1.0),
            ScalingPoint::new(1.0, 1.0, 2.0, 0.5),
            ScalingPoint::new(1.0, 1.0, 3.0, 0.6),
        ];
        let frontier = pareto_frontier(&pts);
        assert_eq!(frontier.len(), 2);
        assert_eq!(frontier[0].energy_per_step, 1.0);
        assert_eq!(frontier[1].energy_per_step, 2.0);
    }

    #[test]
    fn frontier_single_and_duplicate() {
        let single = vec![ScalingPoint::new(1.0, 1.0, 2.0, 0.3)];
        assert_eq!(pareto_frontier(&single), single);

        let dup = vec![
            ScalingPoint::new(1.0, 1.0, 2.0, 0.3),
            ScalingPoint::new(9.0, 9.0, 2.0, 0.3),
        ];
        let frontier = pareto_frontier(&dup);
        assert_eq!(frontier.len(), 1);
        // First occurrence by input order is the representative.
        assert_eq!(frontier[0].data_scale, 1.0);
    }

    #[test]
    fn fit_recovers_synthetic_exponent() {
        let points: Vec<ScalingPoint> = (1..=12)
            .map(|i| {
                let e = 0.37 * 1.9f64.powi(i);
                ScalingPoint::new(1.0, 1.0, e, 1.0 * e.powf(-0.003))
            })
            .collect();
        let fit = powerlaw_fit(&points).unwrap();
        assert!((fit.exponent - 0.003).abs() < 1e-6, "{}", fit.exponent);
        assert!((fit.coefficient - 1.0).abs() < 1e-9);
        assert!(fit.residual < 1e-20);
    }

    #[test]
    fn fit_two_points_interpolates() {
        let pts = vec![
            ScalingPoint::new(1.0, 1.0, 1.0, 0.9),
            ScalingPoint::new(1.0, 1.0, 10.0, 0.8),
        ];
        let fit = powerlaw_fit(&pts).unwrap();
        assert!(fit.residual < 1e-25);
        for p in &pts {
            let predicted = fit.coefficient * p.energy_per_step.powf(-fit.exponent);
            assert!((predicted - p.quality_error).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_flat_errors_give_zero_exponent() {
        let pts = vec![
            ScalingPoint::new(1.0, 1.0, 1.0, 0.5),
            ScalingPoint::new(1.0, 1.0, 4.0, 0.5),
            ScalingPoint::new(1.0, 1.0, 16.0, 0.5),
        ];
        let fit = powerlaw_fit(&pts).unwrap();
        assert_eq!(fit.exponent, 0.0);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(powerlaw_fit(&[ScalingPoint::new(1.0, 1.0, 1.0, 1.0)]).is_err());
        let nonpositive = vec![
            ScalingPoint::new(1.0, 1.0, 1.0, 0.0),
            ScalingPoint::new(1.0, 1.0, 2.0, 0.5),
        ];
        assert!(powerlaw_fit(&nonpositive).is_err());
    }

    #[test]
    fn compare_star_presets() {
        let (frugal, quality) = example_stars();
        let (ratio, delta) = compare_scaling(&frugal, &quality);
        assert!((ratio - 4.0).abs() < 1e-12);
        assert!((delta - 0.004).abs() < 1e-4, "{delta}");
    }

    #[test]
    fn compare_identity_and_halving() {
        let p = ScalingPoint::new(1.0, 1.0, 2.0, 0.4);
        assert_eq!(compare_scaling(&p, &p), (1.0, 0.0));
        let half = ScalingPoint::new(1.0, 1.0, 1.0, 0.4);
        assert_eq!(compare_scaling(&p, &half).0, 0.5);
    }

    #[test]
    fn example_dataset_frontier_fits_in_band() {
        let data = example_scaling_dataset();
        let frontier = pareto_frontier(&data);
        assert_eq!(frontier.len(), 6);
        let fit = powerlaw_fit(&frontier).unwrap();
        assert!((0.002..=0.004).contains(&fit.exponent), "{}", fit.exponent);
    }

    // Independent O(n²) dominance filter used as the frontier oracle.
    fn dominates(q: &ScalingPoint, p: &ScalingPoint) -> bool {
        q.energy_per_step <= p.energy_per_step
            && q.quality_error <= p.quality_error
            && (q.energy_per_step < p.energy_per_step || q.quality_error < p.quality_error)
    }

    fn brute_force_frontier(points: &[ScalingPoint]) -> Vec<ScalingPoint> {
        let mut kept = Vec::new();
        let mut seen: Vec<(f64, f64)> = Vec::new();
        'outer: for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate() {
                if i != j && dominates(q, p) {
                    continue 'outer;
                }
            }
            if seen
                .iter()
                .any(|&(e, err)| e == p.energy_per_step && err == p.quality_error)
            {
                continue;
            }
            seen.push((p.energy_per_step, p.quality_error));
            kept.push(*p);
        }
        kept
    }

    proptest! {
        #[test]
        fn frontier_matches_brute_force(
            raw in proptest::collection::vec((0.01f64..100.0, 0.01f64..2.0), 1..200)
        ) {
            let points: Vec<ScalingPoint> = raw
                .iter()
                .map(|&(e, err)| ScalingPoint::new(1.0, 1.0, e, err))
                .collect();
            let fast = pareto_frontier(&points);
            let slow = brute_force_frontier(&points);
            prop_assert_eq!(fast, slow);
        }

        // Rescaling all energies leaves the exponent unchanged; the
        // coefficient absorbs the scale.
        #[test]
        fn fit_exponent_scale_invariant(scale in 0.01f64..100.0) {
            let base: Vec<ScalingPoint> = (1..=8)
                .map(|i| {
                    let e = 2f64.powi(i);
                    ScalingPoint::new(1.0, 1.0, e, 0.7 * e.powf(-0.0031))
                })
                .collect();
            let scaled: Vec<ScalingPoint> = base
                .iter()
                .map(|p| ScalingPoint::new(1.0, 1.0, p.energy_per_step * scale, p.quality_error))
                .collect();
            let f1 = powerlaw_fit(&base).unwrap();
            let f2 = powerlaw_fit(&scaled).unwrap();
            prop_assert!((f1.exponent - f2.exponent).abs() <= 1e-9);
        }

        // Sweep ratios conserve work and stay affine, for arbitrary baselines.
        #[test]
        fn sweep_invariants(op in 0.1f64..1e5, emb in 0.0f64..1e5, u0 in 0.05f64..1.0) {
            let base = breakdown(op, emb);
            let targets: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
            let us = utilization_sweep(&base, u0, &targets).unwrap();
            for p in &us.points {
                prop_assert!((p.ratio_to_baseline * p.axis - u0).abs() <= 1e-12);
            }
            let rs = renewable_sweep(&base, &targets).unwrap();
            let op_share = op / (op + emb);
            for p in &rs.points {
                prop_assert!((p.ratio_to_baseline - (1.0 - op_share * p.axis)).abs() <= 1e-9);
            }
        }
    }
}
