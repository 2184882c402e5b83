//! Run manifests. Every command serializes one `manifest.json` alongside
//! its outputs recording the exact argv, the fully resolved configuration,
//! the seeds in play, and SHA-256 hashes of each input and output file.
//! Re-running the recorded invocation (same tool version, same inputs)
//! reproduces every output byte for byte; the hashes make that checkable.

use std::fs;
use std::io;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::stage::StagingDir;

/// A file the run read or wrote, with the SHA-256 of its bytes (lowercase
/// hex). Output paths are relative to the output directory so manifests of
/// identical runs into different directories agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand that produced this directory.
    pub command: String,
    /// Exact invocation, argv[0] included.
    pub argv: Vec<String>,
    pub tool_version: String,
    /// Configuration after merging file values and flag overrides.
    pub config: serde_json::Value,
    /// Every seed the run drew randomness from (empty for deterministic
    /// commands).
    pub seeds: Vec<u64>,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    /// RFC 3339 UTC timestamps.
    pub started_at: String,
    pub finished_at: String,
}

pub fn sha256_hex(path: &Path) -> io::Result<String> {
    let bytes = fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn timestamp_now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Accumulates manifest fields across a command's lifetime: construct at
/// start (fixing `started_at`), record inputs as they are read, then
/// `finish` once the outputs are staged.
pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    seeds: Vec<u64>,
    inputs: Vec<FileRecord>,
    started_at: String,
}

impl ManifestBuilder {
    pub fn new(command: &str, config: serde_json::Value, seeds: Vec<u64>) -> Self {
        Self {
            command: command.to_string(),
            config,
            seeds,
            inputs: Vec::new(),
            started_at: timestamp_now(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> io::Result<()> {
        self.inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(path)?,
        });
        Ok(())
    }

    /// Hashes the named staged outputs and assembles the manifest. The
    /// manifest itself is not listed: it cannot contain its own hash.
    pub fn finish(self, staged: &StagingDir, outputs: &[&str]) -> io::Result<RunManifest> {
        let output_records = outputs
            .iter()
            .map(|name| {
                Ok(FileRecord { path: (*name).to_string(), sha256: sha256_hex(&staged.path(name))? })
            })
            .collect::<io::Result<Vec<_>>>()?;
        Ok(RunManifest {
            command: self.command,
            argv: std::env::args().collect(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config,
            seeds: self.seeds,
            inputs: self.inputs,
            outputs: output_records,
            started_at: self.started_at,
            finished_at: timestamp_now(),
        })
    }
}

/// Serializes the manifest into the staging directory as `manifest.json`.
pub fn write_manifest(manifest: &RunManifest, staged: &StagingDir) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    text.push('\n');
    fs::write(staged.path("manifest.json"), text)
}
