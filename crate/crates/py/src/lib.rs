//! Python bindings for the aicarbon toolkit: the core accounting types plus
//! the ledger, scenario, federated-learning, and scheduling operations.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use aicarbon::accounting;
use aicarbon::edgefl;
use aicarbon::ledger;
use aicarbon::lifecycle;
use aicarbon::model;
use aicarbon::scenario;
use aicarbon::sched;

fn err(e: aicarbon::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mode(mode: &str) -> PyResult<model::AccountingMode> {
    match mode {
        "location" | "location_based" => Ok(model::AccountingMode::LocationBased),
        "market" | "market_based" => Ok(model::AccountingMode::MarketBased),
        other => Err(PyValueError::new_err(format!(
            "unknown accounting mode '{other}' (expected location or market)"
        ))),
    }
}

fn parse_kind(kind: &str) -> PyResult<model::PhaseKind> {
    match kind {
        "data" | "data_storage_ingestion" => Ok(model::PhaseKind::DataStorageIngestion),
        "experimentation" => Ok(model::PhaseKind::Experimentation),
        "offline_training" => Ok(model::PhaseKind::OfflineTraining),
        "online_training" => Ok(model::PhaseKind::OnlineTraining),
        "inference" => Ok(model::PhaseKind::Inference),
        other => Err(PyValueError::new_err(format!(
            "unknown phase kind '{other}'"
        ))),
    }
}

fn parse_category(category: &str) -> PyResult<ledger::FactorCategory> {
    match category {
        "model" => Ok(ledger::FactorCategory::Model),
        "platform" => Ok(ledger::FactorCategory::Platform),
        "infrastructure" => Ok(ledger::FactorCategory::Infrastructure),
        "hardware" => Ok(ledger::FactorCategory::Hardware),
        other => Err(PyValueError::new_err(format!(
            "unknown factor category '{other}'"
        ))),
    }
}

/// A node type: power draw, embodied carbon, lifetime.
#[pyclass(name = "HardwarePlatform", from_py_object)]
#[derive(Clone)]
struct PyHardwarePlatform {
    inner: model::HardwarePlatform,
}

#[pymethods]
impl PyHardwarePlatform {
    #[new]
    #[pyo3(signature = (name, device_power_kw, accelerated=true, embodied_kgco2e=None, lifetime_hours=None))]
    fn new(
        name: String,
        device_power_kw: f64,
        accelerated: bool,
        embodied_kgco2e: Option<f64>,
        lifetime_hours: Option<f64>,
    ) -> Self {
        let mut inner = if accelerated {
            model::HardwarePlatform::accelerated(name, device_power_kw)
        } else {
            model::HardwarePlatform::cpu_only(name, device_power_kw)
        };
        if let Some(e) = embodied_kgco2e {
            inner.embodied_kgco2e = e;
        }
        if let Some(l) = lifetime_hours {
            inner.lifetime_hours = l;
        }
        Self { inner }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn device_power_kw(&self) -> f64 {
        self.inner.device_power_kw
    }

    #[getter]
    fn embodied_kgco2e(&self) -> f64 {
        self.inner.embodied_kgco2e
    }

    #[getter]
    fn lifetime_hours(&self) -> f64 {
        self.inner.lifetime_hours
    }

    #[getter]
    fn accelerated(&self) -> bool {
        self.inner.accelerated
    }

    fn __repr__(&self) -> String {
        format!(
            "HardwarePlatform(name='{}', device_power_kw={}, embodied_kgco2e={}, lifetime_hours={}, accelerated={})",
            self.inner.name,
            self.inner.device_power_kw,
            self.inner.embodied_kgco2e,
            self.inner.lifetime_hours,
            self.inner.accelerated
        )
    }
}

/// Time-stamped grid intensity, a right-continuous step function.
#[pyclass(name = "IntensitySeries", from_py_object)]
#[derive(Clone)]
struct PyIntensitySeries {
    inner: model::CarbonIntensitySeries,
}

#[pymethods]
impl PyIntensitySeries {
    /// Constant intensity anchored at t = 0.
    #[staticmethod]
    #[pyo3(signature = (g_per_kwh, mode="location"))]
    fn constant(g_per_kwh: f64, mode: &str) -> PyResult<Self> {
        Ok(Self {
            inner: model::CarbonIntensitySeries::constant(g_per_kwh, parse_mode(mode)?)
                .map_err(err)?,
        })
    }

    /// Series from (time_h, g_per_kwh) pairs with strictly increasing times.
    #[staticmethod]
    #[pyo3(signature = (samples, mode="location"))]
    fn from_samples(samples: Vec<(f64, f64)>, mode: &str) -> PyResult<Self> {
        Ok(Self {
            inner: model::CarbonIntensitySeries::new(samples, parse_mode(mode)?).map_err(err)?,
        })
    }

    #[getter]
    fn samples(&self) -> Vec<(f64, f64)> {
        self.inner
            .samples()
            .iter()
            .map(|s| (s.time_h, s.g_per_kwh))
            .collect()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.mode() {
            model::AccountingMode::LocationBased => "location_based",
            model::AccountingMode::MarketBased => "market_based",
        }
    }
}

/// An ML task: phases plus the energy-supply context they run under.
#[pyclass(name = "Task")]
struct PyTask {
    inner: model::MLTask,
}

#[pymethods]
impl PyTask {
    #[new]
    #[pyo3(signature = (name, intensity, pue=1.1, renewable_matching=0.0))]
    fn new(name: String, intensity: PyIntensitySeries, pue: f64, renewable_matching: f64) -> Self {
        Self {
            inner: model::MLTask::new(name, intensity.inner)
                .with_pue(pue)
                .with_renewable_matching(renewable_matching),
        }
    }

    #[pyo3(signature = (kind, platform, node_count, duration_hours, utilization=1.0))]
    fn add_phase(
        &mut self,
        kind: &str,
        platform: PyHardwarePlatform,
        node_count: u32,
        duration_hours: f64,
        utilization: f64,
    ) -> PyResult<()> {
        self.inner.phases.push(
            model::PhaseProfile::new(
                parse_kind(kind)?,
                platform.inner,
                node_count,
                duration_hours,
            )
            .with_utilization(utilization),
        );
        Ok(())
    }

    /// Invariant violations as "field: rule" strings; empty means valid.
    fn validate(&self) -> Vec<String> {
        model::validate(&self.inner)
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn footprint(&self) -> PyResult<PyBreakdown> {
        Ok(PyBreakdown {
            inner: lifecycle::footprint(&self.inner).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn pue(&self) -> f64 {
        self.inner.pue
    }

    #[getter]
    fn phase_count(&self) -> usize {
        self.inner.phases.len()
    }
}

/// Per-phase operational energy, operational carbon, and embodied carbon.
#[pyclass(name = "Breakdown", from_py_object)]
#[derive(Clone)]
struct PyBreakdown {
    inner: model::CarbonBreakdown,
}

#[pymethods]
impl PyBreakdown {
    #[getter]
    fn total_energy_kwh(&self) -> f64 {
        self.inner.total_energy_kwh()
    }

    #[getter]
    fn total_operational_kgco2e(&self) -> f64 {
        self.inner.total_operational_kgco2e()
    }

    #[getter]
    fn total_embodied_kgco2e(&self) -> f64 {
        self.inner.total_embodied_kgco2e()
    }

    #[getter]
    fn total_kgco2e(&self) -> f64 {
        self.inner.total_kgco2e()
    }

    /// Rows of (phase, energy_kwh, gross_kgco2e, offset_kgco2e, net_kgco2e, embodied_kgco2e).
    fn phases(&self) -> Vec<(String, f64, f64, f64, f64, f64)> {
        self.inner
            .phases
            .iter()
            .map(|p| {
                (
                    p.kind.label().to_string(),
                    p.operational_energy_kwh,
                    p.operational.gross_kgco2e,
                    p.operational.renewable_offset_kgco2e,
                    p.operational.net_kgco2e,
                    p.embodied_kgco2e,
                )
            })
            .collect()
    }

    /// Per-phase fractions of one column: energy, operational, embodied, or total.
    fn shares(&self, column: &str) -> PyResult<Vec<f64>> {
        let col = match column {
            "energy" => lifecycle::ShareColumn::Energy,
            "operational" => lifecycle::ShareColumn::Operational,
            "embodied" => lifecycle::ShareColumn::Embodied,
            "total" => lifecycle::ShareColumn::Total,
            other => return Err(PyValueError::new_err(format!("unknown column '{other}'"))),
        };
        lifecycle::phase_shares(&self.inner, col).map_err(err)
    }

    /// (embodied_fraction, operational_fraction) of the total carbon.
    fn split(&self) -> PyResult<(f64, f64)> {
        lifecycle::embodied_operational_split(&self.inner).map_err(err)
    }
}

#[pyfunction]
fn operational_energy(
    platform: PyHardwarePlatform,
    node_count: u32,
    duration_hours: f64,
    pue: f64,
) -> PyResult<f64> {
    let phase = model::PhaseProfile::new(
        model::PhaseKind::OfflineTraining,
        platform.inner,
        node_count,
        duration_hours,
    );
    accounting::operational_energy(&phase, pue).map_err(err)
}

/// (gross_kgco2e, offset_kgco2e, net_kgco2e) for energy drawn over a window.
#[pyfunction]
#[pyo3(signature = (energy_kwh, intensity, window_start_h, window_end_h, renewable_matching=0.0))]
fn operational_carbon(
    energy_kwh: f64,
    intensity: PyIntensitySeries,
    window_start_h: f64,
    window_end_h: f64,
    renewable_matching: f64,
) -> PyResult<(f64, f64, f64)> {
    let figure = accounting::operational_carbon(
        energy_kwh,
        &intensity.inner,
        (window_start_h, window_end_h),
        renewable_matching,
    )
    .map_err(err)?;
    Ok((
        figure.gross_kgco2e,
        figure.renewable_offset_kgco2e,
        figure.net_kgco2e,
    ))
}

#[pyfunction]
fn mean_intensity(
    intensity: PyIntensitySeries,
    window_start_h: f64,
    window_end_h: f64,
) -> PyResult<f64> {
    accounting::mean_intensity(&intensity.inner, (window_start_h, window_end_h)).map_err(err)
}

/// (kgco2e, capped) for a reservation of node-hours on one node.
#[pyfunction]
#[pyo3(signature = (platform, node_hours, exclusive_share=1.0))]
fn embodied_attribution(
    platform: PyHardwarePlatform,
    node_hours: f64,
    exclusive_share: f64,
) -> PyResult<(f64, bool)> {
    let a = accounting::embodied_attribution(&platform.inner, node_hours, exclusive_share)
        .map_err(err)?;
    Ok((a.kgco2e, a.capped))
}

#[pyfunction]
#[pyo3(signature = (carbon_kgco2e, kg_per_mile=lifecycle::DEFAULT_KG_PER_MILE))]
fn equivalence_miles(carbon_kgco2e: f64, kg_per_mile: f64) -> PyResult<f64> {
    lifecycle::equivalence_miles(carbon_kgco2e, kg_per_mile).map_err(err)
}

/// Aggregate multiplier of (name, category, multiplier) factors.
#[pyfunction]
fn compose(factors: Vec<(String, String, f64)>) -> PyResult<f64> {
    let factors: Vec<ledger::EfficiencyFactor> = factors
        .into_iter()
        .map(|(name, category, multiplier)| {
            Ok(ledger::EfficiencyFactor::new(
                name,
                parse_category(&category)?,
                multiplier,
            ))
        })
        .collect::<PyResult<_>>()?;
    ledger::compose(&factors).map_err(err)
}

/// The 800x-plus language-model optimization chain as (name, category, multiplier) rows.
#[pyfunction]
fn lm_preset() -> Vec<(String, String, f64)> {
    ledger::lm_preset()
        .into_iter()
        .map(|f| {
            let category = match f.category {
                ledger::FactorCategory::Model => "model",
                ledger::FactorCategory::Platform => "platform",
                ledger::FactorCategory::Infrastructure => "infrastructure",
                ledger::FactorCategory::Hardware => "hardware",
            };
            (f.name, category.to_string(), f.multiplier)
        })
        .collect()
}

/// Net demand multiplier per period, entries for k = 0..=periods.
#[pyfunction]
#[pyo3(signature = (periods, efficiency_per_period=0.2, growth_per_period=1.0))]
fn net_trend(
    periods: usize,
    efficiency_per_period: f64,
    growth_per_period: f64,
) -> PyResult<Vec<f64>> {
    ledger::net_trend(
        &ledger::TrendSpec::new(periods)
            .with_efficiency(efficiency_per_period)
            .with_growth(growth_per_period),
    )
    .map_err(err)
}

/// (size_reduction, bandwidth_reduction, latency_speedup) from the default
/// calibration table; None where no calibration exists.
#[pyfunction]
fn quantization_delta(
    model_name: &str,
    bits_from: u32,
    bits_to: u32,
) -> PyResult<(Option<f64>, Option<f64>, Option<f64>)> {
    let d = ledger::QuantizationTable::with_default_calibration()
        .delta(model_name, bits_from, bits_to)
        .map_err(err)?;
    Ok((d.size_reduction, d.bandwidth_reduction, d.latency_speedup))
}

/// One (energy, quality-error) scaling measurement.
#[pyclass(name = "ScalingPoint", from_py_object)]
#[derive(Clone)]
struct PyScalingPoint {
    inner: scenario::ScalingPoint,
}

#[pymethods]
impl PyScalingPoint {
    #[new]
    fn new(data_scale: f64, model_scale: f64, energy_per_step: f64, quality_error: f64) -> Self {
        Self {
            inner: scenario::ScalingPoint::new(
                data_scale,
                model_scale,
                energy_per_step,
                quality_error,
            ),
        }
    }

    #[getter]
    fn data_scale(&self) -> f64 {
        self.inner.data_scale
    }

    #[getter]
    fn model_scale(&self) -> f64 {
        self.inner.model_scale
    }

    #[getter]
    fn energy_per_step(&self) -> f64 {
        self.inner.energy_per_step
    }

    #[getter]
    fn quality_error(&self) -> f64 {
        self.inner.quality_error
    }

    fn __repr__(&self) -> String {
        format!(
            "ScalingPoint(data_scale={}, model_scale={}, energy_per_step={}, quality_error={})",
            self.inner.data_scale,
            self.inner.model_scale,
            self.inner.energy_per_step,
            self.inner.quality_error
        )
    }
}

/// (axis, operational_kgco2e, embodied_kgco2e, total_kgco2e, ratio) sweep row.
type SweepRow = (f64, f64, f64, f64, f64);

fn unwrap_points(points: Vec<PyScalingPoint>) -> Vec<scenario::ScalingPoint> {
    points.into_iter().map(|p| p.inner).collect()
}

/// Non-dominated set under (energy down, error down), in input order.
#[pyfunction]
fn pareto_frontier(points: Vec<PyScalingPoint>) -> Vec<PyScalingPoint> {
    scenario::pareto_frontier(&unwrap_points(points))
        .into_iter()
        .map(|inner| PyScalingPoint { inner })
        .collect()
}

/// (coefficient, exponent, residual) of the log-log least-squares power law.
#[pyfunction]
fn powerlaw_fit(points: Vec<PyScalingPoint>) -> PyResult<(f64, f64, f64)> {
    let fit = scenario::powerlaw_fit(&unwrap_points(points)).map_err(err)?;
    Ok((fit.coefficient, fit.exponent, fit.residual))
}

/// (energy_ratio, error_delta) of choosing measurement a over b.
#[pyfunction]
fn compare_scaling(a: PyScalingPoint, b: PyScalingPoint) -> (f64, f64) {
    scenario::compare_scaling(&a.inner, &b.inner)
}

#[pyfunction]
fn example_scaling_dataset() -> Vec<PyScalingPoint> {
    scenario::example_scaling_dataset()
        .into_iter()
        .map(|inner| PyScalingPoint { inner })
        .collect()
}

#[pyfunction]
fn example_stars() -> (PyScalingPoint, PyScalingPoint) {
    let (a, b) = scenario::example_stars();
    (PyScalingPoint { inner: a }, PyScalingPoint { inner: b })
}

/// Fixed-work utilization sweep over a breakdown's totals. Rows of
/// (utilization, operational_kgco2e, embodied_kgco2e, total_kgco2e, ratio).
#[pyfunction]
fn utilization_sweep(
    baseline: PyBreakdown,
    baseline_utilization: f64,
    targets: Vec<f64>,
) -> PyResult<Vec<SweepRow>> {
    let sweep = scenario::utilization_sweep(&baseline.inner, baseline_utilization, &targets)
        .map_err(err)?;
    Ok(sweep
        .points
        .iter()
        .map(|p| {
            (
                p.axis,
                p.operational_kgco2e,
                p.embodied_kgco2e,
                p.total_kgco2e,
                p.ratio_to_baseline,
            )
        })
        .collect())
}

/// Renewable-matching sweep. Rows of
/// (fraction, operational_kgco2e, embodied_kgco2e, total_kgco2e, ratio).
#[pyfunction]
fn renewable_sweep(baseline: PyBreakdown, fractions: Vec<f64>) -> PyResult<Vec<SweepRow>> {
    let sweep = scenario::renewable_sweep(&baseline.inner, &fractions).map_err(err)?;
    Ok(sweep
        .points
        .iter()
        .map(|p| {
            (
                p.axis,
                p.operational_kgco2e,
                p.embodied_kgco2e,
                p.total_kgco2e,
                p.ratio_to_baseline,
            )
        })
        .collect())
}

/// (compute_kwh, comm_kwh) for aggregate federated-learning client hours.
#[pyfunction]
#[pyo3(signature = (compute_hours, download_hours, upload_hours, device_power_kw=edgefl::DEFAULT_DEVICE_POWER_KW, router_power_kw=edgefl::DEFAULT_ROUTER_POWER_KW))]
fn fl_energy(
    compute_hours: f64,
    download_hours: f64,
    upload_hours: f64,
    device_power_kw: f64,
    router_power_kw: f64,
) -> PyResult<(f64, f64)> {
    let campaign = edgefl::FLCampaign::new(
        edgefl::FlUsage::Aggregate {
            compute_hours,
            download_hours,
            upload_hours,
        },
        model::CarbonIntensitySeries::constant(0.0, model::AccountingMode::LocationBased)
            .map_err(err)?,
    )
    .with_powers(device_power_kw, router_power_kw);
    edgefl::fl_energy(&campaign).map_err(err)
}

/// Operational kgCO2e of a federated-learning campaign, no PUE applied.
#[pyfunction]
#[pyo3(signature = (compute_hours, download_hours, upload_hours, intensity, device_power_kw=edgefl::DEFAULT_DEVICE_POWER_KW, router_power_kw=edgefl::DEFAULT_ROUTER_POWER_KW))]
fn fl_carbon(
    compute_hours: f64,
    download_hours: f64,
    upload_hours: f64,
    intensity: PyIntensitySeries,
    device_power_kw: f64,
    router_power_kw: f64,
) -> PyResult<f64> {
    let campaign = edgefl::FLCampaign::new(
        edgefl::FlUsage::Aggregate {
            compute_hours,
            download_hours,
            upload_hours,
        },
        intensity.inner,
    )
    .with_powers(device_power_kw, router_power_kw);
    edgefl::fl_carbon(&campaign).map_err(err)
}

/// (mu, sigma) of the lognormal matching the given p50/p99 quantiles.
#[pyfunction]
fn lognormal_from_quantiles(p50_days: f64, p99_days: f64) -> PyResult<(f64, f64)> {
    sched::lognormal_from_quantiles(p50_days, p99_days).map_err(err)
}

/// A schedulable workload unit.
#[pyclass(name = "Job", from_py_object)]
#[derive(Clone)]
struct PyJob {
    inner: sched::Job,
}

#[pymethods]
impl PyJob {
    #[new]
    #[pyo3(signature = (id, gpu_days, nodes=1, arrival_h=0.0, slack_h=0.0))]
    fn new(id: String, gpu_days: f64, nodes: u32, arrival_h: f64, slack_h: f64) -> Self {
        Self {
            inner: sched::Job::new(id, gpu_days, nodes, arrival_h, slack_h),
        }
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn gpu_days(&self) -> f64 {
        self.inner.gpu_days
    }

    #[getter]
    fn nodes(&self) -> u32 {
        self.inner.nodes
    }

    #[getter]
    fn arrival_h(&self) -> f64 {
        self.inner.arrival_h
    }

    #[getter]
    fn slack_h(&self) -> f64 {
        self.inner.slack_h
    }
}

/// A datacenter region for the scheduling simulator.
#[pyclass(name = "Region", from_py_object)]
#[derive(Clone)]
struct PyRegion {
    inner: sched::RegionModel,
}

#[pymethods]
impl PyRegion {
    #[new]
    fn new(
        name: String,
        intensity: PyIntensitySeries,
        capacity: u32,
        platform: PyHardwarePlatform,
    ) -> Self {
        Self {
            inner: sched::RegionModel {
                name,
                intensity: intensity.inner,
                capacity,
                platform: platform.inner,
            },
        }
    }
}

/// Deterministic lognormal workload sample.
#[pyfunction]
#[pyo3(signature = (p50_days, p99_days, count, seed, nodes=1, arrival_span_h=0.0, slack_h=0.0))]
fn sample_jobs(
    p50_days: f64,
    p99_days: f64,
    count: usize,
    seed: u64,
    nodes: u32,
    arrival_span_h: f64,
    slack_h: f64,
) -> PyResult<Vec<PyJob>> {
    let params = sched::JobGenParams::from_quantiles(p50_days, p99_days)
        .map_err(err)?
        .with_nodes(nodes)
        .with_arrival_span(arrival_span_h)
        .with_slack(slack_h);
    Ok(sched::sample_jobs(&params, count, seed)
        .map_err(err)?
        .into_iter()
        .map(|inner| PyJob { inner })
        .collect())
}

/// Simulation outcome.
#[pyclass(name = "ScheduleReport", from_py_object)]
#[derive(Clone)]
struct PyScheduleReport {
    inner: sched::ScheduleReport,
}

#[pymethods]
impl PyScheduleReport {
    #[getter]
    fn policy(&self) -> String {
        self.inner.policy.clone()
    }

    #[getter]
    fn total_operational_kgco2e(&self) -> f64 {
        self.inner.total_operational_kgco2e
    }

    #[getter]
    fn overprovision_embodied_kgco2e(&self) -> f64 {
        self.inner.overprovision_embodied_kgco2e
    }

    #[getter]
    fn horizon_h(&self) -> f64 {
        self.inner.horizon_h
    }

    /// Rows of (job_id, region, start_h, duration_h, operational_kgco2e).
    fn placements(&self) -> Vec<(String, String, f64, f64, f64)> {
        self.inner
            .placements
            .iter()
            .map(|p| {
                (
                    p.job_id.clone(),
                    p.region.clone(),
                    p.start_h,
                    p.duration_h,
                    p.operational_kgco2e,
                )
            })
            .collect()
    }

    /// (region, peak_nodes) pairs.
    fn peak_nodes(&self) -> Vec<(String, u32)> {
        self.inner
            .peak_nodes
            .iter()
            .map(|(k, v)| (k.clone(), *v))
            .collect()
    }
}

/// Places jobs under a policy: "immediate", "lowest_window", or
/// "threshold_delay" (with threshold_g_per_kwh).
#[pyfunction]
#[pyo3(signature = (jobs, regions, policy="immediate", pue=1.1, threshold_g_per_kwh=None))]
fn simulate(
    jobs: Vec<PyJob>,
    regions: Vec<PyRegion>,
    policy: &str,
    pue: f64,
    threshold_g_per_kwh: Option<f64>,
) -> PyResult<PyScheduleReport> {
    let policy = match policy {
        "immediate" => sched::Policy::Immediate,
        "lowest_window" => sched::Policy::LowestWindow,
        "threshold_delay" => sched::Policy::ThresholdDelay {
            threshold_g_per_kwh: threshold_g_per_kwh.ok_or_else(|| {
                PyValueError::new_err("threshold_delay requires threshold_g_per_kwh")
            })?,
        },
        other => return Err(PyValueError::new_err(format!("unknown policy '{other}'"))),
    };
    let jobs: Vec<sched::Job> = jobs.into_iter().map(|j| j.inner).collect();
    let regions: Vec<sched::RegionModel> = regions.into_iter().map(|r| r.inner).collect();
    Ok(PyScheduleReport {
        inner: sched::simulate(&jobs, &regions, policy, pue).map_err(err)?,
    })
}

/// (operational_savings, embodied_overhead, net) of a policy vs a baseline.
#[pyfunction]
fn policy_tradeoff(
    baseline: PyScheduleReport,
    policy: PyScheduleReport,
) -> PyResult<(f64, f64, f64)> {
    let t = sched::policy_tradeoff(&baseline.inner, &policy.inner).map_err(err)?;
    Ok((
        t.operational_savings_kgco2e,
        t.embodied_overhead_kgco2e,
        t.net_kgco2e,
    ))
}

#[pymodule]
fn aicarbon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHardwarePlatform>()?;
    m.add_class::<PyIntensitySeries>()?;
    m.add_class::<PyTask>()?;
    m.add_class::<PyBreakdown>()?;
    m.add_class::<PyScalingPoint>()?;
    m.add_class::<PyJob>()?;
    m.add_class::<PyRegion>()?;
    m.add_class::<PyScheduleReport>()?;
    m.add_function(wrap_pyfunction!(operational_energy, m)?)?;
    m.add_function(wrap_pyfunction!(operational_carbon, m)?)?;
    m.add_function(wrap_pyfunction!(mean_intensity, m)?)?;
    m.add_function(wrap_pyfunction!(embodied_attribution, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_miles, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(lm_preset, m)?)?;
    m.add_function(wrap_pyfunction!(net_trend, m)?)?;
    m.add_function(wrap_pyfunction!(quantization_delta, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_frontier, m)?)?;
    m.add_function(wrap_pyfunction!(powerlaw_fit, m)?)?;
    m.add_function(wrap_pyfunction!(compare_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(example_scaling_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(example_stars, m)?)?;
    m.add_function(wrap_pyfunction!(utilization_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(renewable_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(fl_energy, m)?)?;
    m.add_function(wrap_pyfunction!(fl_carbon, m)?)?;
    m.add_function(wrap_pyfunction!(lognormal_from_quantiles, m)?)?;
    m.add_function(wrap_pyfunction!(sample_jobs, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(policy_tradeoff, m)?)?;
    m.add("__version__", aicarbon::VERSION)?;
    Ok(())
}
