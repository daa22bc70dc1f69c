//! Append-only certificate store, one JSON record per line.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use fatpoint_core::interp::Certificate;
use fatpoint_core::linsys::FatPointSystem;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const STORE_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything that influences a stored result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordConfig {
    pub prime: String,
    pub seed: String,
    pub trials: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_matrix_entries: Option<String>,
}

impl RecordConfig {
    pub fn from_run(config: &RunConfig, with_cap: bool) -> Self {
        Self {
            prime: config.field.modulus().to_string(),
            seed: config.seed.to_string(),
            trials: config.trials,
            max_matrix_entries: with_cap.then(|| config.max_matrix_entries.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub schema_version: u32,
    /// SHA-256 of the canonical JSON of `(command, input, config)`.
    pub key: String,
    pub command: String,
    pub input: FatPointSystem,
    pub config: RecordConfig,
    pub certificate: Certificate,
    /// Seconds since the Unix epoch.
    pub recorded_at: u64,
    pub tool_version: String,
}

#[derive(Serialize)]
struct KeyMaterial<'a> {
    command: &'a str,
    input: &'a FatPointSystem,
    config: &'a RecordConfig,
}

pub fn content_key(command: &str, input: &FatPointSystem, config: &RecordConfig) -> String {
    let material = serde_json::to_vec(&KeyMaterial {
        command,
        input,
        config,
    })
    .expect("key material serializes");
    hex::encode(Sha256::digest(&material))
}

impl StoreRecord {
    pub fn new(
        command: &str,
        input: FatPointSystem,
        config: RecordConfig,
        certificate: Certificate,
    ) -> Self {
        let recorded_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            schema_version: STORE_SCHEMA_VERSION,
            key: content_key(command, &input, &config),
            command: command.to_string(),
            input,
            config,
            certificate,
            recorded_at,
            tool_version: TOOL_VERSION.to_string(),
        }
    }
}

/// Handle on a store file. Missing files read as empty.
#[derive(Clone, Debug)]
pub struct Store {
    path: PathBuf,
    records: Vec<StoreRecord>,
}

impl Store {
    pub fn open(path: &Path) -> Result<Self> {
        let mut records = Vec::new();
        if path.exists() {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: StoreRecord = serde_json::from_str(&line)
                    .with_context(|| format!("{}:{}: malformed record", path.display(), i + 1))?;
                records.push(record);
            }
        }
        Ok(Self {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn records(&self) -> &[StoreRecord] {
        &self.records
    }

    /// Latest record with this key.
    pub fn lookup(&self, key: &str) -> Option<&StoreRecord> {
        self.records.iter().rev().find(|r| r.key == key)
    }

    /// Appends unless a record with the same key is already present.
    pub fn append(&mut self, record: StoreRecord) -> Result<bool> {
        if self.lookup(&record.key).is_some() {
            return Ok(false);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {}", self.path.display()))?;
        writeln!(file, "{}", serde_json::to_string(&record)?)?;
        file.sync_all()?;
        self.records.push(record);
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fatpoint_core::interp::certify;

    fn record(d: i64) -> StoreRecord {
        let config = RunConfig::default();
        let s = FatPointSystem::homogeneous(d, 10, 1);
        let cert = certify(&s, 3, config.field, config.seed).unwrap();
        StoreRecord::new("certify", s, RecordConfig::from_run(&config, false), cert)
    }

    #[test]
    fn append_is_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let mut store = Store::open(&path).unwrap();
        assert!(store.records().is_empty());
        assert!(store.append(record(4)).unwrap());
        assert!(!store.append(record(4)).unwrap());
        assert!(store.append(record(5)).unwrap());

        let reopened = Store::open(&path).unwrap();
        assert_eq!(reopened.records().len(), 2);
        assert_eq!(reopened.records(), store.records());
    }

    #[test]
    fn key_depends_on_config() {
        let s = FatPointSystem::homogeneous(4, 10, 1);
        let a = RecordConfig::from_run(&RunConfig::default(), false);
        let mut b = a.clone();
        b.seed = "2".into();
        assert_ne!(
            content_key("certify", &s, &a),
            content_key("certify", &s, &b)
        );
        assert_ne!(content_key("certify", &s, &a), content_key("sweep", &s, &a));
        assert_eq!(content_key("certify", &s, &a).len(), 64);
    }

    #[test]
    fn malformed_line_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        std::fs::write(&path, "{not json}\n").unwrap();
        let err = Store::open(&path).unwrap_err();
        assert!(format!("{err:#}").contains(":1: malformed record"));
    }
}
