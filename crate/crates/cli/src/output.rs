//! Serialization of result tables and reports.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// A named output file held in memory until the run completes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn optional_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn csv(name: &str, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<Artifact> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        writer.write_record(row)?;
    }
    Ok(Artifact { name: name.to_string(), bytes: writer.into_inner()? })
}

pub fn json<T: Serialize>(name: &str, value: &T) -> anyhow::Result<Artifact> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(Artifact { name: name.to_string(), bytes })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub seed: Option<u64>,
    pub config_sha256: String,
    pub cli_version: String,
    pub core_version: String,
    pub outputs: Vec<OutputEntry>,
}

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

impl OutputEntry {
    pub fn describe(artifact: &Artifact) -> Self {
        OutputEntry { file: artifact.name.clone(), bytes: artifact.bytes.len(), sha256: sha256_hex(&artifact.bytes) }
    }
}
