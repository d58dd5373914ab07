//! Lifecycle carbon accounting and what-if modeling for machine learning workloads.
//!
//! The crate computes operational and embodied (manufacturing) carbon across the
//! major ML development phases — data storage/ingestion, experimentation,
//! training, inference — and runs scenario analyses on top of the accounting
//! core: multiplicative efficiency ledgers, utilization and renewable-matching
//! sweeps, data/model scaling Pareto analysis with power-law fitting,
//! federated-learning edge estimates, and a carbon-aware scheduling simulator.
//!
//! Units are fixed fleet-wide: node power in kW, time in hours, energy in kWh,
//! grid intensity in gCO₂e/kWh, emissions in kgCO₂e.

pub mod accounting;
pub mod card;
pub mod config;
pub mod edgefl;
pub mod error;
pub mod ledger;
pub mod lifecycle;
pub mod model;
pub mod report;
pub mod runlog;
pub mod scenario;
pub mod sched;

pub use error::{Error, Result};

/// Toolkit version recorded in run logs and model cards.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
