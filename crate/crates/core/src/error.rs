//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {what}")]
    NonFinite { what: String },

    #[error("invalid input: {what}")]
    InvalidInput { what: String },

    #[error("no intensity coverage over window [{start_h} h, {end_h} h]")]
    NoIntensityCoverage { start_h: f64, end_h: f64 },

    #[error("empty breakdown: {column} total is zero")]
    EmptyBreakdown { column: &'static str },

    #[error("task validation failed in {phase}: {detail}")]
    InvalidTask { phase: String, detail: String },

    #[error("no calibration for {model} {bits_from}->{bits_to} bits")]
    NoCalibration {
        model: String,
        bits_from: u32,
        bits_to: u32,
    },

    #[error("infeasible instance: job {job_id} cannot be placed within its slack window")]
    Infeasible { job_id: String },

    #[error("schedule reports cover different job sets: {detail}")]
    JobSetMismatch { detail: String },

    #[error("config error in {path}: {detail}")]
    Config { path: String, detail: String },

    #[error("{path}:{row}: {detail}")]
    CsvRow {
        path: String,
        row: usize,
        detail: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
