//! Discrete-time carbon-aware scheduling simulator.
//!
//! Workloads sampled from GPU-day quantiles are placed in time (and across
//! regions) against carbon-intensity traces. Jobs are non-preemptible and
//! non-migratable once started; delays are whole hours, matching the hourly
//! cadence of published grid intensities. The simulator quantifies the
//! operational savings of delay policies against the embodied cost of the
//! over-provisioned capacity they need.

use serde::Serialize;
use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Uniform};

use crate::accounting::mean_intensity;
use crate::error::{Error, Result};
use crate::model::{CarbonIntensitySeries, HardwarePlatform};

/// Standard normal 99th-percentile deviate used by the quantile fit.
pub const Z99: f64 = 2.32635;

/// A schedulable workload unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub id: String,
    /// Total accelerator demand, GPU-days. Wall-clock duration is
    /// `gpu_days × 24 / nodes` hours.
    pub gpu_days: f64,
    /// Parallel width in nodes.
    pub nodes: u32,
    pub arrival_h: f64,
    /// Allowed start delay past arrival, hours.
    pub slack_h: f64,
}

impl Job {
    pub fn new(
        id: impl Into<String>,
        gpu_days: f64,
        nodes: u32,
        arrival_h: f64,
        slack_h: f64,
    ) -> Self {
        Self {
            id: id.into(),
            gpu_days,
            nodes,
            arrival_h,
            slack_h,
        }
    }

    pub fn wall_hours(&self) -> f64 {
        self.gpu_days * 24.0 / f64::from(self.nodes)
    }

    fn check(&self) -> Result<()> {
        if !(self.gpu_days.is_finite() && self.gpu_days > 0.0) {
            return Err(Error::InvalidInput {
                what: format!("job {}: gpu_days must be > 0", self.id),
            });
        }
        if self.nodes == 0 {
            return Err(Error::InvalidInput {
                what: format!("job {}: nodes must be >= 1", self.id),
            });
        }
        if !(self.arrival_h.is_finite() && self.arrival_h >= 0.0) {
            return Err(Error::InvalidInput {
                what: format!("job {}: arrival must be >= 0 h", self.id),
            });
        }
        if !(self.slack_h.is_finite() && self.slack_h >= 0.0) {
            return Err(Error::InvalidInput {
                what: format!("job {}: slack must be >= 0 h", self.id),
            });
        }
        Ok(())
    }
}

/// A datacenter region: its grid trace, node capacity, and node platform.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionModel {
    pub name: String,
    pub intensity: CarbonIntensitySeries,
    pub capacity: u32,
    pub platform: HardwarePlatform,
}

/// Placement policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Start each job at the earliest feasible slot.
    Immediate,
    /// Delay while the job's window mean intensity exceeds the threshold;
    /// when no window qualifies, wait maximally within slack.
    ThresholdDelay { threshold_g_per_kwh: f64 },
    /// Pick the feasible window with the lowest operational carbon for each
    /// job in arrival order.
    LowestWindow,
}

impl Policy {
    pub fn label(&self) -> String {
        match self {
            Policy::Immediate => "immediate".into(),
            Policy::ThresholdDelay {
                threshold_g_per_kwh,
            } => {
                format!("threshold_delay({threshold_g_per_kwh})")
            }
            Policy::LowestWindow => "lowest_window".into(),
        }
    }
}

/// One job's placement in the schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    pub job_id: String,
    pub region: String,
    pub start_h: f64,
    pub duration_h: f64,
    pub nodes: u32,
    pub energy_kwh: f64,
    pub operational_kgco2e: f64,
}

/// Completion statistics over all placed jobs.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct CompletionStats {
    pub jobs: usize,
    pub makespan_h: f64,
    pub mean_delay_h: f64,
    pub max_delay_h: f64,
    pub mean_completion_h: f64,
}

/// Simulation outcome: placements, operational carbon, concurrency peaks,
/// and the embodied cost of capacity held above the immediate-placement peak.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleReport {
    pub policy: String,
    pub pue: f64,
    pub placements: Vec<Placement>,
    pub total_operational_kgco2e: f64,
    /// Peak concurrent node usage per region.
    pub peak_nodes: BTreeMap<String, u32>,
    /// Immediate-policy peaks, the over-provisioning reference.
    pub reference_peak_nodes: BTreeMap<String, u32>,
    /// Embodied carbon of capacity above the reference peak, amortized over
    /// the simulation horizon.
    pub overprovision_embodied_kgco2e: f64,
    /// End of the last placement, hours from simulation start.
    pub horizon_h: f64,
    pub completion: CompletionStats,
}

/// Operational savings vs embodied overhead of a policy against a baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolicyTradeoff {
    pub operational_savings_kgco2e: f64,
    pub embodied_overhead_kgco2e: f64,
    /// Savings minus overhead; positive means the policy is carbon-positive.
    pub net_kgco2e: f64,
}

/// Inverts the two lognormal quantile equations:
/// `mu = ln(p50)`, `sigma = ln(p99/p50) / z99`.
pub fn lognormal_from_quantiles(p50_days: f64, p99_days: f64) -> Result<(f64, f64)> {
    if !(p50_days.is_finite() && p99_days.is_finite()) {
        return Err(Error::NonFinite {
            what: "quantile inputs".into(),
        });
    }
    if !(0.0 < p50_days && p50_days < p99_days) {
        return Err(Error::InvalidInput {
            what: format!("quantiles must satisfy 0 < p50 < p99, got ({p50_days}, {p99_days})"),
        });
    }
    Ok((p50_days.ln(), (p99_days / p50_days).ln() / Z99))
}

/// Parameters for sampling a synthetic workload.
#[derive(Debug, Clone, PartialEq)]
pub struct JobGenParams {
    /// Lognormal location of GPU-day demand.
    pub mu: f64,
    /// Lognormal scale of GPU-day demand.
    pub sigma: f64,
    pub nodes: u32,
    /// Arrivals are uniform over `[0, arrival_span_h)`.
    pub arrival_span_h: f64,
    pub slack_h: f64,
}

impl JobGenParams {
    pub fn from_quantiles(p50_days: f64, p99_days: f64) -> Result<Self> {
        let (mu, sigma) = lognormal_from_quantiles(p50_days, p99_days)?;
        Ok(Self {
            mu,
            sigma,
            nodes: 1,
            arrival_span_h: 0.0,
            slack_h: 0.0,
        })
    }

    pub fn with_nodes(mut self, nodes: u32) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_arrival_span(mut self, span_h: f64) -> Self {
        self.arrival_span_h = span_h;
        self
    }

    pub fn with_slack(mut self, slack_h: f64) -> Self {
        self.slack_h = slack_h;
        self
    }
}

/// Samples `count` jobs deterministically from the seed. Arrival hours are
/// uniform over the configured span and floored to whole hours.
pub fn sample_jobs(params: &JobGenParams, count: usize, seed: u64) -> Result<Vec<Job>> {
    if !(params.sigma.is_finite() && params.sigma >= 0.0 && params.mu.is_finite()) {
        return Err(Error::InvalidInput {
            what: format!(
                "lognormal params must be finite with sigma >= 0, got mu={} sigma={}",
                params.mu, params.sigma
            ),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let demand = LogNormal::new(params.mu, params.sigma).map_err(|e| Error::InvalidInput {
        what: format!("lognormal params: {e}"),
    })?;
    let arrivals = if params.arrival_span_h > 0.0 {
        Some(
            Uniform::new(0.0, params.arrival_span_h).map_err(|e| Error::InvalidInput {
                what: format!("arrival span: {e}"),
            })?,
        )
    } else {
        None
    };
    let mut jobs = Vec::with_capacity(count);
    for i in 0..count {
        let gpu_days = demand.sample(&mut rng);
        let arrival_h = arrivals
            .as_ref()
            .map_or(0.0, |u| u.sample(&mut rng).floor());
        jobs.push(Job::new(
            format!("job-{i:06}"),
            gpu_days,
            params.nodes,
            arrival_h,
            params.slack_h,
        ));
    }
    Ok(jobs)
}

struct Booked {
    start_h: f64,
    end_h: f64,
    nodes: u32,
}

/// Max concurrent node usage over intervals, counting a tentative extra
/// reservation if given.
fn peak_usage(booked: &[Booked], extra: Option<(f64, f64, u32)>) -> u32 {
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(booked.len() * 2 + 2);
    for b in booked {
        events.push((b.start_h, i64::from(b.nodes)));
        events.push((b.end_h, -i64::from(b.nodes)));
    }
    if let Some((s, e, n)) = extra {
        events.push((s, i64::from(n)));
        events.push((e, -i64::from(n)));
    }
    // Ends sort before starts at the same instant: back-to-back jobs do not
    // overlap.
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut load = 0i64;
    let mut peak = 0i64;
    for (_, delta) in events {
        load += delta;
        peak = peak.max(load);
    }
    u32::try_from(peak.max(0)).unwrap_or(u32::MAX)
}

fn fits(region: &RegionModel, booked: &[Booked], start_h: f64, end_h: f64, nodes: u32) -> bool {
    nodes <= region.capacity && peak_usage(booked, Some((start_h, end_h, nodes))) <= region.capacity
}

struct Candidate {
    region_idx: usize,
    start_h: f64,
    carbon_kgco2e: f64,
    mean_g_per_kwh: f64,
}

fn candidates_for(
    job: &Job,
    regions: &[RegionModel],
    booked: &[Vec<Booked>],
    pue: f64,
) -> Result<Vec<Candidate>> {
    let duration = job.wall_hours();
    let max_delay = job.slack_h.floor() as i64;
    let mut out = Vec::new();
    for delay in 0..=max_delay {
        let start = job.arrival_h + delay as f64;
        for (ri, region) in regions.iter().enumerate() {
            if !fits(region, &booked[ri], start, start + duration, job.nodes) {
                continue;
            }
            let mean = mean_intensity(&region.intensity, (start, start + duration))?;
            let energy = region.platform.device_power_kw * f64::from(job.nodes) * duration * pue;
            out.push(Candidate {
                region_idx: ri,
                start_h: start,
                carbon_kgco2e: energy * mean / 1000.0,
                mean_g_per_kwh: mean,
            });
        }
    }
    Ok(out)
}

fn pick(policy: Policy, candidates: &[Candidate]) -> Option<&Candidate> {
    // Candidates come ordered by (delay, region index), so `min_by` tie-breaks
    // to the earliest start and first region.
    match policy {
        Policy::Immediate => candidates.first(),
        Policy::ThresholdDelay {
            threshold_g_per_kwh,
        } => candidates
            .iter()
            .find(|c| c.mean_g_per_kwh <= threshold_g_per_kwh)
            .or_else(|| candidates.last()),
        Policy::LowestWindow => candidates.iter().min_by(|a, b| {
            a.carbon_kgco2e
                .total_cmp(&b.carbon_kgco2e)
                .then(a.start_h.total_cmp(&b.start_h))
                .then(a.region_idx.cmp(&b.region_idx))
        }),
    }
}

fn run_policy(
    jobs: &[Job],
    regions: &[RegionModel],
    policy: Policy,
    pue: f64,
) -> Result<(Vec<Placement>, Vec<Vec<Booked>>)> {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by(|&a, &b| {
        jobs[a]
            .arrival_h
            .total_cmp(&jobs[b].arrival_h)
            .then(jobs[a].id.cmp(&jobs[b].id))
    });
    let mut booked: Vec<Vec<Booked>> = regions.iter().map(|_| Vec::new()).collect();
    let mut placements = Vec::with_capacity(jobs.len());
    for &ji in &order {
        let job = &jobs[ji];
        let candidates = candidates_for(job, regions, &booked, pue)?;
        let chosen = pick(policy, &candidates).ok_or(Error::Infeasible {
            job_id: job.id.clone(),
        })?;
        let duration = job.wall_hours();
        let region = &regions[chosen.region_idx];
        booked[chosen.region_idx].push(Booked {
            start_h: chosen.start_h,
            end_h: chosen.start_h + duration,
            nodes: job.nodes,
        });
        placements.push(Placement {
            job_id: job.id.clone(),
            region: region.name.clone(),
            start_h: chosen.start_h,
            duration_h: duration,
            nodes: job.nodes,
            energy_kwh: region.platform.device_power_kw * f64::from(job.nodes) * duration * pue,
            operational_kgco2e: chosen.carbon_kgco2e,
        });
    }
    Ok((placements, booked))
}

fn region_peaks(regions: &[RegionModel], booked: &[Vec<Booked>]) -> BTreeMap<String, u32> {
    regions
        .iter()
        .zip(booked)
        .map(|(r, b)| (r.name.clone(), peak_usage(b, None)))
        .collect()
}

/// Places every job under the policy and accounts the schedule.
///
/// Operational carbon integrates each job's energy against its region's
/// intensity trace over the execution window. Over-provisioned capacity is
/// charged against the immediate-placement peak: extra peak nodes carry their
/// platform's embodied carbon amortized over the simulation horizon.
pub fn simulate(
    jobs: &[Job],
    regions: &[RegionModel],
    policy: Policy,
    pue: f64,
) -> Result<ScheduleReport> {
    if regions.is_empty() {
        return Err(Error::InvalidInput {
            what: "at least one region is required".into(),
        });
    }
    for r in regions {
        if r.capacity == 0 {
            return Err(Error::InvalidInput {
                what: format!("region {}: capacity must be >= 1", r.name),
            });
        }
    }
    if !(pue.is_finite() && pue >= 1.0) {
        return Err(Error::InvalidInput {
            what: format!("pue must be >= 1.0, got {pue}"),
        });
    }
    for job in jobs {
        job.check()?;
    }

    let (placements, booked) = run_policy(jobs, regions, policy, pue)?;
    let peak_nodes = region_peaks(regions, &booked);
    let reference_peak_nodes = if policy == Policy::Immediate {
        peak_nodes.clone()
    } else {
        let (_, ref_booked) = run_policy(jobs, regions, Policy::Immediate, pue)?;
        region_peaks(regions, &ref_booked)
    };

    let horizon_h = placements
        .iter()
        .map(|p| p.start_h + p.duration_h)
        .fold(0.0, f64::max);
    let mut overprovision = 0.0;
    for region in regions {
        let peak = *peak_nodes.get(&region.name).unwrap_or(&0);
        let reference = *reference_peak_nodes.get(&region.name).unwrap_or(&0);
        if peak > reference {
            let extra = f64::from(peak - reference);
            overprovision += extra * region.platform.embodied_kgco2e * horizon_h
                / region.platform.lifetime_hours;
        }
    }

    let total_operational = placements.iter().map(|p| p.operational_kgco2e).sum();
    let completion = completion_stats(jobs, &placements);
    Ok(ScheduleReport {
        policy: policy.label(),
        pue,
        placements,
        total_operational_kgco2e: total_operational,
        peak_nodes,
        reference_peak_nodes,
        overprovision_embodied_kgco2e: overprovision,
        horizon_h,
        completion,
    })
}

fn completion_stats(jobs: &[Job], placements: &[Placement]) -> CompletionStats {
    if placements.is_empty() {
        return CompletionStats::default();
    }
    let arrivals: BTreeMap<&str, f64> = jobs.iter().map(|j| (j.id.as_str(), j.arrival_h)).collect();
    let n = placements.len() as f64;
    let mut sum_delay = 0.0;
    let mut max_delay = 0.0f64;
    let mut sum_completion = 0.0;
    let mut makespan = 0.0f64;
    for p in placements {
        let delay = p.start_h
            - arrivals
                .get(p.job_id.as_str())
                .copied()
                .unwrap_or(p.start_h);
        sum_delay += delay;
        max_delay = max_delay.max(delay);
        let end = p.start_h + p.duration_h;
        sum_completion += end;
        makespan = makespan.max(end);
    }
    CompletionStats {
        jobs: placements.len(),
        makespan_h: makespan,
        mean_delay_h: sum_delay / n,
        max_delay_h: max_delay,
        mean_completion_h: sum_completion / n,
    }
}

/// Difference between a baseline report and a policy report over the same
/// job set.
pub fn policy_tradeoff(
    baseline: &ScheduleReport,
    policy: &ScheduleReport,
) -> Result<PolicyTradeoff> {
    fn ids(r: &ScheduleReport) -> Vec<&str> {
        let mut v: Vec<&str> = r.placements.iter().map(|p| p.job_id.as_str()).collect();
        v.sort_unstable();
        v
    }
    let a = ids(baseline);
    let b = ids(policy);
    if a != b {
        return Err(Error::JobSetMismatch {
            detail: format!("baseline has {} jobs, candidate has {}", a.len(), b.len()),
        });
    }
    let operational_savings = baseline.total_operational_kgco2e - policy.total_operational_kgco2e;
    let embodied_overhead =
        policy.overprovision_embodied_kgco2e - baseline.overprovision_embodied_kgco2e;
    Ok(PolicyTradeoff {
        operational_savings_kgco2e: operational_savings,
        embodied_overhead_kgco2e: embodied_overhead,
        net_kgco2e: operational_savings - embodied_overhead,
    })
}

/// Independent schedule validator: replays the report against the instance
/// and checks the feasibility invariants — every job placed exactly once
/// within its slack window, capacity respected at all times, and the
/// operational total consistent with the placements.
pub fn validate_report(
    jobs: &[Job],
    regions: &[RegionModel],
    report: &ScheduleReport,
) -> Result<()> {
    let by_id: BTreeMap<&str, &Job> = jobs.iter().map(|j| (j.id.as_str(), j)).collect();
    if report.placements.len() != jobs.len() {
        return Err(Error::InvalidInput {
            what: format!(
                "report places {} of {} jobs",
                report.placements.len(),
                jobs.len()
            ),
        });
    }
    let mut seen: Vec<&str> = Vec::new();
    let mut per_region: BTreeMap<&str, Vec<Booked>> = BTreeMap::new();
    let mut recomputed_total = 0.0;
    for p in &report.placements {
        let job = by_id
            .get(p.job_id.as_str())
            .ok_or_else(|| Error::InvalidInput {
                what: format!("placement for unknown job {}", p.job_id),
            })?;
        if seen.contains(&p.job_id.as_str()) {
            return Err(Error::InvalidInput {
                what: format!("job {} placed more than once", p.job_id),
            });
        }
        seen.push(&p.job_id);
        if p.start_h < job.arrival_h - 1e-9 || p.start_h > job.arrival_h + job.slack_h + 1e-9 {
            return Err(Error::InvalidInput {
                what: format!(
                    "job {} starts at {} h outside [{}, {}]",
                    p.job_id,
                    p.start_h,
                    job.arrival_h,
                    job.arrival_h + job.slack_h
                ),
            });
        }
        let region =
            regions
                .iter()
                .find(|r| r.name == p.region)
                .ok_or_else(|| Error::InvalidInput {
                    what: format!("placement in unknown region {}", p.region),
                })?;
        let energy =
            region.platform.device_power_kw * f64::from(job.nodes) * job.wall_hours() * report.pue;
        let mean = mean_intensity(&region.intensity, (p.start_h, p.start_h + job.wall_hours()))?;
        recomputed_total += energy * mean / 1000.0;
        per_region
            .entry(region.name.as_str())
            .or_default()
            .push(Booked {
                start_h: p.start_h,
                end_h: p.start_h + job.wall_hours(),
                nodes: job.nodes,
            });
    }
    for region in regions {
        if let Some(booked) = per_region.get(region.name.as_str()) {
            let peak = peak_usage(booked, None);
            if peak > region.capacity {
                return Err(Error::InvalidInput {
                    what: format!(
                        "region {}: peak usage {} exceeds capacity {}",
                        region.name, peak, region.capacity
                    ),
                });
            }
        }
    }
    let scale = report.total_operational_kgco2e.abs().max(1.0);
    if (recomputed_total - report.total_operational_kgco2e).abs() > 1e-9 * scale {
        return Err(Error::InvalidInput {
            what: format!(
                "replayed operational total {} differs from reported {}",
                recomputed_total, report.total_operational_kgco2e
            ),
        });
    }
    Ok(())
}
