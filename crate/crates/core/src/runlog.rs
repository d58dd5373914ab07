//! Append-only run-record log.
//!
//! Every CLI invocation appends one JSON line describing what ran, digests of
//! its inputs, and the headline results, so a logged config digest can be
//! replayed and checked against the logged summary. Appends are single
//! `write` calls on an `O_APPEND` handle so concurrent invocations never
//! interleave partial records.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};

/// Env var overriding the run-log location.
pub const RUNLOG_ENV: &str = "AICARBON_RUNLOG";
const RUNLOG_DEFAULT: &str = "aicarbon_runs.jsonl";

/// One logged invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub timestamp_unix_s: u64,
    pub subcommand: String,
    pub config_digest_sha256: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub input_digests_sha256: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_kgco2e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_kwh: Option<f64>,
    pub version: String,
}

impl RunRecord {
    pub fn new(subcommand: impl Into<String>, config_digest: impl Into<String>) -> Self {
        Self {
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            subcommand: subcommand.into(),
            config_digest_sha256: config_digest.into(),
            input_digests_sha256: BTreeMap::new(),
            total_kgco2e: None,
            total_kwh: None,
            version: crate::VERSION.to_string(),
        }
    }
}

/// SHA-256 of file contents, hex-encoded. Stable across re-serialization
/// because it hashes the raw bytes.
pub fn digest_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Run-log location: `AICARBON_RUNLOG` or `aicarbon_runs.jsonl` in the
/// working directory.
pub fn runlog_path() -> PathBuf {
    std::env::var_os(RUNLOG_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(RUNLOG_DEFAULT))
}

/// Appends one record as a single line. The file is opened in append mode and
/// the line written with one `write_all`, keeping records whole under
/// concurrent writers.
pub fn append_run_record(path: &Path, record: &RunRecord) -> Result<()> {
    let mut line = serde_json::to_string(record).map_err(|e| Error::Serialize(e.to_string()))?;
    line.push('\n');
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(line.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads every record in the log, oldest first.
pub fn read_run_records(path: &Path) -> Result<Vec<RunRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RunRecord = serde_json::from_str(&line).map_err(|e| Error::CsvRow {
            path: path.display().to_string(),
            row: i + 1,
            detail: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_is_append_only_across_invocations() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.jsonl");
        let mut first = RunRecord::new("estimate", "abc");
        first.total_kgco2e = Some(12.5);
        append_run_record(&path, &first).unwrap();
        let mut second = RunRecord::new("sweep", "def");
        second.total_kwh = Some(99.0);
        append_run_record(&path, &second).unwrap();

        let records = read_run_records(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].subcommand, "estimate");
        assert_eq!(records[0].total_kgco2e, Some(12.5));
        assert_eq!(records[1].subcommand, "sweep");
    }

    #[test]
    fn digests_are_stable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.task");
        std::fs::write(&path, "name = \"x\"\n").unwrap();
        let a = digest_file(&path).unwrap();
        let b = digest_file(&path).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
        assert_eq!(a, digest_bytes(b"name = \"x\"\n"));
    }

    #[test]
    fn record_round_trips_through_json() {
        let mut record = RunRecord::new("card", "0123");
        record
            .input_digests_sha256
            .insert("intensity.csv".into(), "aa".into());
        let line = serde_json::to_string(&record).unwrap();
        let back: RunRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(record, back);
    }
}
