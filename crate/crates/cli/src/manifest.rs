use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Provenance of one run. Everything except the timestamps and the elapsed
/// time is a function of the inputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub inputs: Vec<InputDigest>,
    pub started: String,
    pub finished: String,
    pub elapsed_ms: f64,
    /// SHA-256 of the compact JSON encoding of `result`.
    pub result_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Document<'a> {
    pub manifest: &'a RunManifest,
    pub result: &'a Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads an input file and records its digest.
pub fn read_input(path: &Path, inputs: &mut Vec<InputDigest>) -> CliResult<Vec<u8>> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    inputs.push(InputDigest {
        path: path.to_path_buf(),
        sha256: sha256_hex(&bytes),
    });
    Ok(bytes)
}

/// Wall clock for a run.
pub struct Clock {
    started: DateTime<Utc>,
    instant: Instant,
}

impl Clock {
    pub fn start() -> Self {
        Clock {
            started: Utc::now(),
            instant: Instant::now(),
        }
    }

    /// Fills the manifest fields that depend on time and the result.
    pub fn finish(
        self,
        command: &str,
        config: Value,
        seed: Option<u64>,
        threads: Option<usize>,
        inputs: Vec<InputDigest>,
        result: &Value,
    ) -> RunManifest {
        let canonical = serde_json::to_vec(result).expect("JSON values always serialize");
        RunManifest {
            command: command.to_string(),
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config,
            seed,
            threads,
            inputs,
            started: self.started.to_rfc3339_opts(SecondsFormat::Millis, true),
            finished: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            elapsed_ms: self.instant.elapsed().as_secs_f64() * 1e3,
            result_sha256: sha256_hex(&canonical),
        }
    }
}
