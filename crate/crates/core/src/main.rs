//! `aicarbon` — carbon accounting and what-if modeling CLI.
//!
//! Every subcommand reads a config file, computes, writes the result to
//! stdout or `--out`, and appends a record to the run log. Errors go to
//! stderr as JSON and exit nonzero.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aicarbon::card::{emit_model_card, CardProvenance};
use aicarbon::config::{parse_config, ConfigDoc, SweepKind};
use aicarbon::error::{Error, Result};
use aicarbon::ledger::{compose, net_trend};
use aicarbon::lifecycle::{footprint, DEFAULT_KG_PER_MILE};
use aicarbon::model::CarbonIntensitySeries;
use aicarbon::report;
use aicarbon::runlog::{append_run_record, digest_file, runlog_path, RunRecord};
use aicarbon::scenario::{
    pareto_frontier, powerlaw_fit, renewable_sweep, utilization_sweep, SweepResult,
};
use aicarbon::sched::{policy_tradeoff, simulate, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Parser)]
#[command(
    name = "aicarbon",
    version,
    about = "Lifecycle carbon accounting for ML workloads"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Parser)]
struct CommonArgs {
    /// Task config file.
    #[arg(long)]
    config: PathBuf,
    /// Intensity trace CSV overriding the config's intensity section.
    #[arg(long)]
    intensity: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override for sampled workloads.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the operational + embodied footprint of a task.
    Estimate(CommonArgs),
    /// Run the utilization or renewable sweep configured in [sweep].
    Sweep(CommonArgs),
    /// Compose the efficiency ledger and project the demand trend.
    Ledger(CommonArgs),
    /// Pareto frontier and power-law fit of scaling measurements.
    Pareto(CommonArgs),
    /// Federated-learning campaign estimate.
    Fl(CommonArgs),
    /// Carbon-aware scheduling simulation.
    Schedule(CommonArgs),
    /// Emit a markdown carbon-impact model card.
    Card(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Estimate(_) => "estimate",
            Command::Sweep(_) => "sweep",
            Command::Ledger(_) => "ledger",
            Command::Pareto(_) => "pareto",
            Command::Fl(_) => "fl",
            Command::Schedule(_) => "schedule",
            Command::Card(_) => "card",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Estimate(a)
            | Command::Sweep(a)
            | Command::Ledger(a)
            | Command::Pareto(a)
            | Command::Fl(a)
            | Command::Schedule(a)
            | Command::Card(a) => a,
        }
    }
}

struct Outcome {
    body: String,
    total_kgco2e: Option<f64>,
    total_kwh: Option<f64>,
}

fn base_dir(config: &Path) -> PathBuf {
    config
        .parent()
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

fn intensity_override(args: &CommonArgs, doc: &ConfigDoc) -> Result<Option<CarbonIntensitySeries>> {
    match &args.intensity {
        Some(path) => {
            let mode = doc
                .intensity
                .as_ref()
                .map_or(aicarbon::model::AccountingMode::LocationBased, |i| i.mode);
            Ok(Some(aicarbon::config::ingest_intensity_csv(path, mode)?))
        }
        None => Ok(None),
    }
}

fn kg_per_mile(doc: &ConfigDoc) -> f64 {
    doc.equivalence_kg_per_mile.unwrap_or(DEFAULT_KG_PER_MILE)
}

fn sweep_csv_or_json(args: &CommonArgs, name: &str, sweep: &SweepResult) -> Result<String> {
    match args.format {
        Format::Csv => Ok(sweep.to_csv()),
        _ => report::emit_sweep_report(name, sweep),
    }
}

fn run(command: &Command) -> Result<Outcome> {
    let args = command.args();
    let doc = parse_config(&args.config)?;
    match command {
        Command::Estimate(args) => {
            let task = doc.task(&base_dir(&args.config), intensity_override(args, &doc)?)?;
            let breakdown = footprint(&task)?;
            Ok(Outcome {
                body: report::emit_breakdown_report(&task, &breakdown, kg_per_mile(&doc))?,
                total_kgco2e: Some(breakdown.total_kgco2e()),
                total_kwh: Some(breakdown.total_energy_kwh()),
            })
        }
        Command::Card(args) => {
            let task = doc.task(&base_dir(&args.config), intensity_override(args, &doc)?)?;
            let breakdown = footprint(&task)?;
            let provenance = CardProvenance {
                config_digest: Some(digest_file(&args.config)?),
                version: aicarbon::VERSION.to_string(),
            };
            Ok(Outcome {
                body: emit_model_card(&task, &breakdown, kg_per_mile(&doc), &provenance)?,
                total_kgco2e: Some(breakdown.total_kgco2e()),
                total_kwh: Some(breakdown.total_energy_kwh()),
            })
        }
        Command::Sweep(args) => {
            let sweep_cfg = doc.sweep.as_ref().ok_or_else(|| Error::InvalidInput {
                what: "config has no [sweep] section".into(),
            })?;
            let task = doc.task(&base_dir(&args.config), intensity_override(args, &doc)?)?;
            let baseline = footprint(&task)?;
            let sweep = match sweep_cfg.kind {
                SweepKind::Utilization => {
                    let u0 = sweep_cfg
                        .baseline_utilization
                        .ok_or_else(|| Error::InvalidInput {
                            what: "utilization sweep requires baseline_utilization".into(),
                        })?;
                    utilization_sweep(&baseline, u0, &sweep_cfg.targets)?
                }
                SweepKind::Renewable => renewable_sweep(&baseline, &sweep_cfg.targets)?,
            };
            Ok(Outcome {
                body: sweep_csv_or_json(args, &task.name, &sweep)?,
                total_kgco2e: Some(baseline.total_kgco2e()),
                total_kwh: Some(baseline.total_energy_kwh()),
            })
        }
        Command::Ledger(_) => {
            let ledger_cfg = doc.ledger.as_ref().ok_or_else(|| Error::InvalidInput {
                what: "config has no [ledger] section".into(),
            })?;
            let factors = ledger_cfg.build_factors()?;
            let aggregate = compose(&factors)?;
            let trend = match ledger_cfg.build_trend() {
                Some(spec) => Some(net_trend(&spec)?),
                None => None,
            };
            Ok(Outcome {
                body: report::emit_ledger_report(&doc.name, &factors, aggregate, trend.as_deref())?,
                total_kgco2e: None,
                total_kwh: None,
            })
        }
        Command::Pareto(args) => {
            let scaling = doc.scaling.as_ref().ok_or_else(|| Error::InvalidInput {
                what: "config has no [scaling] section".into(),
            })?;
            let points = scaling.build_points(&base_dir(&args.config))?;
            let frontier = pareto_frontier(&points);
            let fit = powerlaw_fit(&frontier).ok();
            let body = match args.format {
                Format::Csv => report::pareto_csv(&frontier),
                _ => report::emit_pareto_report(&doc.name, points.len(), &frontier, fit)?,
            };
            Ok(Outcome {
                body,
                total_kgco2e: None,
                total_kwh: None,
            })
        }
        Command::Fl(args) => {
            let fl_cfg = doc.fl.as_ref().ok_or_else(|| Error::InvalidInput {
                what: "config has no [fl] section".into(),
            })?;
            let campaign =
                fl_cfg.build(&base_dir(&args.config), intensity_override(args, &doc)?)?;
            let estimate = aicarbon::edgefl::estimate(&campaign)?;
            Ok(Outcome {
                body: report::emit_fl_report(&doc.name, &estimate)?,
                total_kgco2e: Some(estimate.operational_kgco2e),
                total_kwh: Some(estimate.compute_kwh + estimate.comm_kwh),
            })
        }
        Command::Schedule(args) => {
            let sched_cfg = doc.schedule.as_ref().ok_or_else(|| Error::InvalidInput {
                what: "config has no [schedule] section".into(),
            })?;
            let dir = base_dir(&args.config);
            let jobs = sched_cfg.build_jobs(&dir, args.seed)?;
            let regions = sched_cfg.build_regions(&doc, &dir)?;
            let policy = sched_cfg.build_policy()?;
            let result = simulate(&jobs, &regions, policy, sched_cfg.pue)?;
            let tradeoff = if policy == Policy::Immediate {
                None
            } else {
                let baseline = simulate(&jobs, &regions, Policy::Immediate, sched_cfg.pue)?;
                Some(policy_tradeoff(&baseline, &result)?)
            };
            let total_kwh = result.placements.iter().map(|p| p.energy_kwh).sum();
            Ok(Outcome {
                body: report::emit_schedule_report(&doc.name, &result, tradeoff)?,
                total_kgco2e: Some(result.total_operational_kgco2e),
                total_kwh: Some(total_kwh),
            })
        }
    }
}

fn write_output(args: &CommonArgs, body: &str) -> Result<()> {
    match &args.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| Error::io(path.display().to_string(), e))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn log_run(command: &Command, outcome: &Outcome) -> Result<()> {
    let args = command.args();
    let mut record = RunRecord::new(command.name(), digest_file(&args.config)?);
    if let Some(intensity) = &args.intensity {
        record
            .input_digests_sha256
            .insert(intensity.display().to_string(), digest_file(intensity)?);
    }
    record.total_kgco2e = outcome.total_kgco2e;
    record.total_kwh = outcome.total_kwh;
    append_run_record(&runlog_path(), &record)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = write_output(cli.command.args(), &outcome.body) {
                return fail(cli.command.name(), &e);
            }
            if let Err(e) = log_run(&cli.command, &outcome) {
                return fail(cli.command.name(), &e);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(cli.command.name(), &e),
    }
}

/// Machine-readable error on stderr, nonzero exit.
fn fail(subcommand: &str, error: &Error) -> ExitCode {
    let payload = serde_json::json!({
        "subcommand": subcommand,
        "error": error.to_string(),
    });
    eprintln!("{payload}");
    ExitCode::from(1)
}
