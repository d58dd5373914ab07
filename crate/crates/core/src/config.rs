//! Hierarchical plain-text config ingestion and emission, plus CSV ingestion
//! for intensity traces, FL logs, job instances, and scaling measurements.
//!
//! The config format is TOML with explicit units in key names. Unknown keys
//! are hard errors — a typo must never silently change an assumption that
//! ends up printed in a model card. Timestamps in all file formats are hours
//! as decimal numbers.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::edgefl::{
    FLCampaign, FLClientLog, FlUsage, DEFAULT_DEVICE_POWER_KW, DEFAULT_ROUTER_POWER_KW,
};
use crate::error::{Error, Result};
use crate::ledger::{preset as ledger_preset, EfficiencyFactor, FactorCategory, TrendSpec};
use crate::model::{
    validate, AccountingMode, CarbonIntensitySeries, HardwarePlatform, MLTask, PhaseKind,
    PhaseProfile, DEFAULT_ACCEL_EMBODIED_KGCO2E, DEFAULT_CPU_EMBODIED_KGCO2E,
    DEFAULT_LIFETIME_HOURS, DEFAULT_PUE,
};
use crate::scenario::{example_scaling_dataset, ScalingPoint};
use crate::sched::{Job, JobGenParams, Policy, RegionModel};

fn default_pue() -> f64 {
    DEFAULT_PUE
}

fn default_true() -> bool {
    true
}

fn default_utilization() -> f64 {
    1.0
}

fn default_device_power() -> f64 {
    DEFAULT_DEVICE_POWER_KW
}

fn default_router_power() -> f64 {
    DEFAULT_ROUTER_POWER_KW
}

fn default_efficiency() -> f64 {
    0.20
}

fn default_growth() -> f64 {
    1.0
}

fn default_one_u32() -> u32 {
    1
}

/// Top-level config document. Scalar keys come first, then sections;
/// `[[platform]]` and `[[phase]]` close the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub name: String,
    #[serde(default = "default_pue")]
    pub pue: f64,
    #[serde(default)]
    pub renewable_matching: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalence_kg_per_mile: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<IntensityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fl: Option<FlConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default, rename = "platform", skip_serializing_if = "Vec::is_empty")]
    pub platforms: Vec<PlatformConfig>,
    #[serde(default, rename = "phase", skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<PhaseConfig>,
}

/// Intensity source: exactly one of a constant, inline samples, or a CSV path
/// (relative to the config file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntensityConfig {
    #[serde(default = "default_mode")]
    pub mode: AccountingMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_g_per_kwh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

fn default_mode() -> AccountingMode {
    AccountingMode::LocationBased
}

impl IntensityConfig {
    pub fn constant(g_per_kwh: f64, mode: AccountingMode) -> Self {
        Self {
            mode,
            constant_g_per_kwh: Some(g_per_kwh),
            samples: None,
            csv: None,
        }
    }

    pub fn series(&self, base_dir: &Path) -> Result<CarbonIntensitySeries> {
        match (&self.constant_g_per_kwh, &self.samples, &self.csv) {
            (Some(v), None, None) => CarbonIntensitySeries::constant(*v, self.mode),
            (None, Some(samples), None) => CarbonIntensitySeries::new(samples.clone(), self.mode),
            (None, None, Some(rel)) => ingest_intensity_csv(&base_dir.join(rel), self.mode),
            _ => Err(Error::InvalidInput {
                what: "intensity requires exactly one of constant_g_per_kwh, samples, csv".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformConfig {
    pub name: String,
    pub device_power_kw: f64,
    #[serde(default = "default_true")]
    pub accelerated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embodied_kgco2e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifetime_hours: Option<f64>,
}

impl PlatformConfig {
    pub fn build(&self) -> HardwarePlatform {
        HardwarePlatform {
            name: self.name.clone(),
            device_power_kw: self.device_power_kw,
            embodied_kgco2e: self.embodied_kgco2e.unwrap_or(if self.accelerated {
                DEFAULT_ACCEL_EMBODIED_KGCO2E
            } else {
                DEFAULT_CPU_EMBODIED_KGCO2E
            }),
            lifetime_hours: self.lifetime_hours.unwrap_or(DEFAULT_LIFETIME_HOURS),
            accelerated: self.accelerated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    pub kind: PhaseKind,
    pub platform: String,
    pub node_count: u32,
    pub duration_hours: f64,
    #[serde(default = "default_utilization")]
    pub utilization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<TrendConfig>,
    #[serde(default, rename = "factor", skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorConfig>,
}

impl LedgerConfig {
    /// Factors from the preset (if named) followed by inline factors.
    pub fn build_factors(&self) -> Result<Vec<EfficiencyFactor>> {
        let mut out = Vec::new();
        if let Some(name) = &self.preset {
            out.extend(ledger_preset(name)?);
        }
        for f in &self.factors {
            out.push(f.build()?);
        }
        if out.is_empty() {
            return Err(Error::InvalidInput {
                what: "ledger requires a preset or at least one [[ledger.factor]]".into(),
            });
        }
        Ok(out)
    }

    pub fn build_trend(&self) -> Option<TrendSpec> {
        self.trend.as_ref().map(|t| TrendSpec {
            periods: t.periods,
            efficiency_per_period: t.efficiency_per_period,
            growth_per_period: t.growth_per_period,
        })
    }
}

/// One efficiency factor, given either as a multiplier or as a fractional
/// reduction (normalized to a multiplier at ingestion).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub name: String,
    pub category: FactorCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<f64>,
}

impl FactorConfig {
    pub fn build(&self) -> Result<EfficiencyFactor> {
        match (self.multiplier, self.reduction) {
            (Some(m), None) => Ok(EfficiencyFactor::new(self.name.clone(), self.category, m)),
            (None, Some(r)) => {
                EfficiencyFactor::from_percent_reduction(self.name.clone(), self.category, r)
            }
            _ => Err(Error::InvalidInput {
                what: format!(
                    "factor {}: exactly one of multiplier, reduction is required",
                    self.name
                ),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendConfig {
    pub periods: usize,
    #[serde(default = "default_efficiency")]
    pub efficiency_per_period: f64,
    #[serde(default = "default_growth")]
    pub growth_per_period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Utilization,
    Renewable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kind: SweepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_utilization: Option<f64>,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_csv: Option<String>,
    #[serde(default, rename = "point", skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<ScalingPointConfig>,
}

impl ScalingConfig {
    pub fn build_points(&self, base_dir: &Path) -> Result<Vec<ScalingPoint>> {
        let mut out = Vec::new();
        if let Some(preset) = &self.preset {
            match preset.as_str() {
                "recsys" => out.extend(example_scaling_dataset()),
                other => {
                    return Err(Error::InvalidInput {
                        what: format!("unknown scaling preset '{other}' (available: recsys)"),
                    })
                }
            }
        }
        if let Some(rel) = &self.points_csv {
            out.extend(ingest_scaling_csv(&base_dir.join(rel))?);
        }
        out.extend(self.points.iter().map(|p| {
            ScalingPoint::new(
                p.data_scale,
                p.model_scale,
                p.energy_per_step,
                p.quality_error,
            )
        }));
        if out.is_empty() {
            return Err(Error::InvalidInput {
                what: "scaling requires a preset, points_csv, or inline [[scaling.point]]".into(),
            });
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingPointConfig {
    pub data_scale: f64,
    pub model_scale: f64,
    pub energy_per_step: f64,
    pub quality_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlConfig {
    #[serde(default = "default_device_power")]
    pub device_power_kw: f64,
    #[serde(default = "default_router_power")]
    pub router_power_kw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logs_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<IntensityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub totals: Option<FlTotalsConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlTotalsConfig {
    pub compute_hours: f64,
    pub download_hours: f64,
    pub upload_hours: f64,
}

impl FlConfig {
    pub fn build(
        &self,
        base_dir: &Path,
        intensity_override: Option<CarbonIntensitySeries>,
    ) -> Result<FLCampaign> {
        let usage = match (&self.logs_csv, &self.totals) {
            (Some(rel), None) => FlUsage::PerClient(ingest_fl_logs_csv(&base_dir.join(rel))?),
            (None, Some(t)) => FlUsage::Aggregate {
                compute_hours: t.compute_hours,
                download_hours: t.download_hours,
                upload_hours: t.upload_hours,
            },
            _ => {
                return Err(Error::InvalidInput {
                    what: "fl requires exactly one of logs_csv, totals".into(),
                })
            }
        };
        let series = match intensity_override {
            Some(s) => s,
            None => self
                .intensity
                .as_ref()
                .ok_or_else(|| Error::InvalidInput {
                    what: "fl requires an [fl.intensity] section or --intensity".into(),
                })?
                .series(base_dir)?,
        };
        Ok(FLCampaign::new(usage, series).with_powers(self.device_power_kw, self.router_power_kw))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_g_per_kwh: Option<f64>,
    #[serde(default = "default_pue")]
    pub pue: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleConfig>,
    #[serde(default, rename = "region", skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RegionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub count: usize,
    pub p50_gpu_days: f64,
    pub p99_gpu_days: f64,
    #[serde(default = "default_one_u32")]
    pub nodes: u32,
    #[serde(default)]
    pub arrival_span_h: f64,
    #[serde(default)]
    pub slack_h: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub name: String,
    pub capacity: u32,
    pub platform: String,
    pub intensity: IntensityConfig,
}

impl ScheduleConfig {
    pub fn build_policy(&self) -> Result<Policy> {
        match self.policy.as_str() {
            "immediate" => Ok(Policy::Immediate),
            "lowest_window" => Ok(Policy::LowestWindow),
            "threshold_delay" => {
                let threshold = self
                    .threshold_g_per_kwh
                    .ok_or_else(|| Error::InvalidInput {
                        what: "threshold_delay policy requires threshold_g_per_kwh".into(),
                    })?;
                Ok(Policy::ThresholdDelay {
                    threshold_g_per_kwh: threshold,
                })
            }
            other => Err(Error::InvalidInput {
                what: format!(
                    "unknown policy '{other}' (expected immediate, threshold_delay, lowest_window)"
                ),
            }),
        }
    }

    pub fn build_jobs(&self, base_dir: &Path, seed_override: Option<u64>) -> Result<Vec<Job>> {
        match (&self.jobs_csv, &self.sample) {
            (Some(rel), None) => ingest_jobs_csv(&base_dir.join(rel)),
            (None, Some(s)) => {
                let params = JobGenParams::from_quantiles(s.p50_gpu_days, s.p99_gpu_days)?
                    .with_nodes(s.nodes)
                    .with_arrival_span(s.arrival_span_h)
                    .with_slack(s.slack_h);
                crate::sched::sample_jobs(&params, s.count, seed_override.unwrap_or(s.seed))
            }
            _ => Err(Error::InvalidInput {
                what: "schedule requires exactly one of jobs_csv, [schedule.sample]".into(),
            }),
        }
    }

    pub fn build_regions(&self, doc: &ConfigDoc, base_dir: &Path) -> Result<Vec<RegionModel>> {
        if self.regions.is_empty() {
            return Err(Error::InvalidInput {
                what: "schedule requires at least one [[schedule.region]]".into(),
            });
        }
        self.regions
            .iter()
            .map(|r| {
                Ok(RegionModel {
                    name: r.name.clone(),
                    intensity: r.intensity.series(base_dir)?,
                    capacity: r.capacity,
                    platform: doc.resolve_platform(&r.platform)?,
                })
            })
            .collect()
    }
}

impl ConfigDoc {
    pub fn resolve_platform(&self, name: &str) -> Result<HardwarePlatform> {
        self.platforms
            .iter()
            .find(|p| p.name == name)
            .map(PlatformConfig::build)
            .ok_or_else(|| Error::InvalidInput {
                what: format!("phase references undefined platform '{name}'"),
            })
    }

    /// Builds the fully validated task. `intensity_override` (from
    /// `--intensity`) takes precedence over the `[intensity]` section.
    pub fn task(
        &self,
        base_dir: &Path,
        intensity_override: Option<CarbonIntensitySeries>,
    ) -> Result<MLTask> {
        let series = match intensity_override {
            Some(s) => s,
            None => self
                .intensity
                .as_ref()
                .ok_or_else(|| Error::InvalidInput {
                    what: "task requires an [intensity] section or --intensity".into(),
                })?
                .series(base_dir)?,
        };
        let mut task = MLTask::new(self.name.clone(), series)
            .with_pue(self.pue)
            .with_renewable_matching(self.renewable_matching);
        for phase in &self.phases {
            task = task.with_phase(
                PhaseProfile::new(
                    phase.kind,
                    self.resolve_platform(&phase.platform)?,
                    phase.node_count,
                    phase.duration_hours,
                )
                .with_utilization(phase.utilization),
            );
        }
        let violations = validate(&task);
        if !violations.is_empty() {
            let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidInput {
                what: format!("task validation failed: {}", listed.join("; ")),
            });
        }
        Ok(task)
    }

    /// Config document capturing a task, for write-back. Platforms are
    /// deduplicated by name.
    pub fn from_task(task: &MLTask) -> Result<Self> {
        let mut platforms: Vec<PlatformConfig> = Vec::new();
        for phase in &task.phases {
            let p = &phase.platform;
            match platforms.iter().find(|c| c.name == p.name) {
                None => platforms.push(PlatformConfig {
                    name: p.name.clone(),
                    device_power_kw: p.device_power_kw,
                    accelerated: p.accelerated,
                    embodied_kgco2e: Some(p.embodied_kgco2e),
                    lifetime_hours: Some(p.lifetime_hours),
                }),
                Some(existing) => {
                    if existing.build() != *p {
                        return Err(Error::InvalidInput {
                            what: format!(
                                "two phases use platform name '{}' with different parameters",
                                p.name
                            ),
                        });
                    }
                }
            }
        }
        let samples: Vec<(f64, f64)> = task
            .intensity
            .samples()
            .iter()
            .map(|s| (s.time_h, s.g_per_kwh))
            .collect();
        Ok(ConfigDoc {
            name: task.name.clone(),
            pue: task.pue,
            renewable_matching: task.renewable_matching,
            equivalence_kg_per_mile: None,
            intensity: Some(IntensityConfig {
                mode: task.intensity.mode(),
                constant_g_per_kwh: None,
                samples: Some(samples),
                csv: None,
            }),
            ledger: None,
            sweep: None,
            scaling: None,
            fl: None,
            schedule: None,
            platforms,
            phases: task
                .phases
                .iter()
                .map(|p| PhaseConfig {
                    kind: p.kind,
                    platform: p.platform.name.clone(),
                    node_count: p.node_count,
                    duration_hours: p.duration_hours,
                    utilization: p.utilization,
                })
                .collect(),
        })
    }
}

/// Parses a config file. Syntax errors carry line/column; unknown keys and
/// missing required keys are named.
pub fn parse_config(path: &Path) -> Result<ConfigDoc> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Config { detail, .. } => Error::Config {
            path: path.display().to_string(),
            detail,
        },
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<ConfigDoc> {
    toml::from_str(text).map_err(|e| {
        let detail = e.to_string();
        let detail = match detail.find("missing field `") {
            Some(_) => detail.replacen("missing field", "missing required key:", 1),
            None => detail,
        };
        Error::Config {
            path: "<config>".into(),
            detail,
        }
    })
}

/// Canonical emission: defaults materialized, fields in schema order.
/// Re-emitting a parsed document is byte-identical.
pub fn emit_config(doc: &ConfigDoc) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::Serialize(e.to_string()))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config {
            path: path.display().to_string(),
            detail: e.to_string(),
        })
}

fn require_headers(
    path: &Path,
    reader: &mut csv::Reader<fs::File>,
    expected: &[&str],
) -> Result<()> {
    let headers = reader.headers().map_err(|e| Error::Config {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::CsvRow {
            path: path.display().to_string(),
            row: 1,
            detail: format!(
                "expected header {:?}, got {:?}",
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    row: usize,
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<T> {
    let raw = record.get(idx).ok_or_else(|| Error::CsvRow {
        path: path.display().to_string(),
        row,
        detail: format!("missing column {name}"),
    })?;
    raw.parse().map_err(|_| Error::CsvRow {
        path: path.display().to_string(),
        row,
        detail: format!("cannot parse {name} from '{raw}'"),
    })
}

/// Ingests an intensity trace CSV with header `timestamp_h,g_per_kwh`.
/// Timestamps must be strictly increasing (duplicates rejected) and
/// intensities non-negative; errors carry the offending row number.
pub fn ingest_intensity_csv(path: &Path, mode: AccountingMode) -> Result<CarbonIntensitySeries> {
    let mut reader = csv_reader(path)?;
    require_headers(path, &mut reader, &["timestamp_h", "g_per_kwh"])?;
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // header is row 1
        let record = record.map_err(|e| Error::CsvRow {
            path: path.display().to_string(),
            row,
            detail: e.to_string(),
        })?;
        let t: f64 = parse_field(path, row, &record, 0, "timestamp_h")?;
        let v: f64 = parse_field(path, row, &record, 1, "g_per_kwh")?;
        if v < 0.0 {
            return Err(Error::CsvRow {
                path: path.display().to_string(),
                row,
                detail: format!("negative intensity {v}"),
            });
        }
        if let Some(&(prev, _)) = samples.last() {
            if t <= prev {
                return Err(Error::CsvRow {
                    path: path.display().to_string(),
                    row,
                    detail: format!("timestamp {t} h does not increase past {prev} h"),
                });
            }
        }
        samples.push((t, v));
    }
    CarbonIntensitySeries::new(samples, mode)
}

/// Ingests per-client FL logs with header `client_id,compute_s,download_s,upload_s`.
/// Times are seconds and converted to hours internally.
pub fn ingest_fl_logs_csv(path: &Path) -> Result<Vec<FLClientLog>> {
    let mut reader = csv_reader(path)?;
    require_headers(
        path,
        &mut reader,
        &["client_id", "compute_s", "download_s", "upload_s"],
    )?;
    let mut logs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::CsvRow {
            path: path.display().to_string(),
            row,
            detail: e.to_string(),
        })?;
        let compute_s: f64 = parse_field(path, row, &record, 1, "compute_s")?;
        let download_s: f64 = parse_field(path, row, &record, 2, "download_s")?;
        let upload_s: f64 = parse_field(path, row, &record, 3, "upload_s")?;
        for (name, v) in [
            ("compute_s", compute_s),
            ("download_s", download_s),
            ("upload_s", upload_s),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::CsvRow {
                    path: path.display().to_string(),
                    row,
                    detail: format!("{name} must be >= 0, got {v}"),
                });
            }
        }
        logs.push(FLClientLog::new(
            compute_s / 3600.0,
            download_s / 3600.0,
            upload_s / 3600.0,
        ));
    }
    Ok(logs)
}

/// Ingests a job instance CSV with header `id,gpu_days,nodes,arrival_h,slack_h`.
pub fn ingest_jobs_csv(path: &Path) -> Result<Vec<Job>> {
    let mut reader = csv_reader(path)?;
    require_headers(
        path,
        &mut reader,
        &["id", "gpu_days", "nodes", "arrival_h", "slack_h"],
    )?;
    let mut jobs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::CsvRow {
            path: path.display().to_string(),
            row,
            detail: e.to_string(),
        })?;
        let id: String = parse_field(path, row, &record, 0, "id")?;
        let gpu_days: f64 = parse_field(path, row, &record, 1, "gpu_days")?;
        let nodes: u32 = parse_field(path, row, &record, 2, "nodes")?;
        let arrival_h: f64 = parse_field(path, row, &record, 3, "arrival_h")?;
        let slack_h: f64 = parse_field(path, row, &record, 4, "slack_h")?;
        jobs.push(Job::new(id, gpu_days, nodes, arrival_h, slack_h));
    }
    Ok(jobs)
}

/// Ingests scaling measurements with header
/// `data_scale,model_scale,energy_per_step,quality_error`.
pub fn ingest_scaling_csv(path: &Path) -> Result<Vec<ScalingPoint>> {
    let mut reader = csv_reader(path)?;
    require_headers(
        path,
        &mut reader,
        &[
            "data_scale",
            "model_scale",
            "energy_per_step",
            "quality_error",
        ],
    )?;
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::CsvRow {
            path: path.display().to_string(),
            row,
            detail: e.to_string(),
        })?;
        points.push(ScalingPoint::new(
            parse_field(path, row, &record, 0, "data_scale")?,
            parse_field(path, row, &record, 1, "model_scale")?,
            parse_field(path, row, &record, 2, "energy_per_step")?,
            parse_field(path, row, &record, 3, "quality_error")?,
        ));
    }
    Ok(points)
}
