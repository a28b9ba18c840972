use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub created_at: String,
    pub subcommand: String,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
}

/// Collects the files written by one run so the manifest can list them.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    records: Vec<OutputRecord>,
}

impl OutputSet {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            records: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn records(&self) -> &[OutputRecord] {
        &self.records
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.records.push(OutputRecord {
            file: name.to_string(),
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Computation(e.to_string()))?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn write_jsonl<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let mut bytes = Vec::new();
        for row in rows {
            serde_json::to_writer(&mut bytes, row).map_err(|e| CliError::Computation(e.to_string()))?;
            bytes.push(b'\n');
        }
        self.write_bytes(name, &bytes)
    }

    pub fn write_csv(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Computation(e.to_string());
        w.write_record(&table.header).map_err(fail)?;
        for row in &table.rows {
            w.write_record(row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Computation(e.to_string()))?;
        self.write_bytes(name, &bytes)
    }

    pub fn finish(self, subcommand: &str, config: serde_json::Value) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            tool: "thermolab",
            version: env!("CARGO_PKG_VERSION"),
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            subcommand: subcommand.to_string(),
            config,
            outputs: self.records,
        };
        let path = self.dir.join(MANIFEST_NAME);
        let mut bytes = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Computation(e.to_string()))?;
        bytes.push(b'\n');
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(manifest)
    }
}

/// In-memory CSV: a header and rows of already formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
