//! Parameter checkpointing.
//!
//! Checkpoints are JSON documents carrying every named tensor with its
//! dimensions plus a format-version field. JSON keeps the round trip exact:
//! the shortest-representation float encoding reproduces each f64 bit for
//! bit, so a saved and reloaded policy is identical to the original.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{AgentError, PolicyParams};

/// Current checkpoint format version.
pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint is not valid JSON: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported checkpoint format version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("checkpoint shapes are inconsistent: {0}")]
    BadShapes(#[from] AgentError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub params: PolicyParams,
}

/// Writes the parameters as a versioned JSON checkpoint.
pub fn save(params: &PolicyParams, path: &Path) -> Result<(), CheckpointError> {
    let checkpoint =
        Checkpoint { format_version: CHECKPOINT_FORMAT_VERSION, params: params.clone() };
    let writer = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(writer, &checkpoint)?;
    Ok(())
}

/// Reads a checkpoint, rejecting unknown versions and inconsistent tensor
/// shapes before handing the parameters back.
pub fn load(path: &Path) -> Result<PolicyParams, CheckpointError> {
    let reader = BufReader::new(File::open(path)?);
    let checkpoint: Checkpoint = serde_json::from_reader(reader)?;
    if checkpoint.format_version != CHECKPOINT_FORMAT_VERSION {
        return Err(CheckpointError::UnsupportedVersion {
            found: checkpoint.format_version,
            supported: CHECKPOINT_FORMAT_VERSION,
        });
    }
    checkpoint.params.validate_shapes()?;
    Ok(checkpoint.params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentDims;

    fn params() -> PolicyParams {
        let dims = AgentDims { feature_dim: 3, hidden_size: 2, conv_channels: 2, conv_kernel: 3 };
        PolicyParams::init(dims, 5).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let original = params();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("checkpoint.json");
        save(&original, &path).unwrap();
        let restored = load(&path).unwrap();
        assert_eq!(restored, original);
    }

    #[test]
    fn future_version_is_rejected() {
        let original = params();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("checkpoint.json");
        let doc = Checkpoint { format_version: 99, params: original };
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        assert!(matches!(
            load(&path),
            Err(CheckpointError::UnsupportedVersion { found: 99, supported: 1 })
        ));
    }

    #[test]
    fn inconsistent_shapes_are_rejected_with_expected_vs_found() {
        let mut broken = params();
        broken.sub.head_w.push(0.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("checkpoint.json");
        let doc = Checkpoint { format_version: 1, params: broken };
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        match load(&path) {
            Err(CheckpointError::BadShapes(AgentError::DimensionMismatch {
                what,
                expected,
                found,
            })) => {
                assert_eq!(what, "sub.head_w");
                assert_eq!(expected, 4);
                assert_eq!(found, 5);
            }
            other => panic!("expected shape error, got {other:?}"),
        }
    }

    #[test]
    fn garbage_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("checkpoint.json");
        std::fs::write(&path, "not json at all").unwrap();
        assert!(matches!(load(&path), Err(CheckpointError::Malformed(_))));
    }
}
