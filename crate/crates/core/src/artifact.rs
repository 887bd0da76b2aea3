//! Versioned JSON artifacts with atomic writes and config-hash checks.
//! Every artifact is written to a temp file in the target directory and
//! renamed into place, so partial runs never leave a corrupt work dir.

use std::fs;
use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ArtifactError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("malformed artifact {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("unsupported artifact version {found} in {path} (expected {expected})")]
    Version { path: String, found: u32, expected: u32 },
    #[error("stale artifact {path}: config hash {found} does not match current {expected}")]
    HashMismatch { path: String, found: String, expected: String },
    #[error("missing checkpoint: {0}")]
    MissingCheckpoint(String),
}

/// Envelope every artifact is wrapped in.
#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub version: u32,
    pub config_hash: String,
    pub payload: T,
}

fn io_err(path: &Path, source: io::Error) -> ArtifactError {
    ArtifactError::Io { path: path.display().to_string(), source }
}

/// Serialize to pretty JSON, write to a temp sibling, then rename.
pub fn write_json<T: Serialize>(path: &Path, config_hash: &str, payload: &T) -> Result<(), ArtifactError> {
    let envelope = Envelope {
        version: FORMAT_VERSION,
        config_hash: config_hash.to_string(),
        payload,
    };
    let body = serde_json::to_string_pretty(&envelope).map_err(|e| ArtifactError::Malformed {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    write_atomic(path, body.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ArtifactError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
        }
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Read an artifact, checking format version and (when `expected_hash` is
/// given) the embedded config hash.
pub fn read_json<T: DeserializeOwned>(
    path: &Path,
    expected_hash: Option<&str>,
) -> Result<T, ArtifactError> {
    let body = fs::read_to_string(path).map_err(|e| {
        if e.kind() == io::ErrorKind::NotFound {
            ArtifactError::MissingCheckpoint(path.display().to_string())
        } else {
            io_err(path, e)
        }
    })?;
    let envelope: Envelope<T> =
        serde_json::from_str(&body).map_err(|e| ArtifactError::Malformed {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    if envelope.version != FORMAT_VERSION {
        return Err(ArtifactError::Version {
            path: path.display().to_string(),
            found: envelope.version,
            expected: FORMAT_VERSION,
        });
    }
    if let Some(expected) = expected_hash {
        if envelope.config_hash != expected {
            return Err(ArtifactError::HashMismatch {
                path: path.display().to_string(),
                found: envelope.config_hash,
                expected: expected.to_string(),
            });
        }
    }
    Ok(envelope.payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hash_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("thing.json");
        write_json(&path, "abc", &vec![1u32, 2, 3]).unwrap();
        let back: Vec<u32> = read_json(&path, Some("abc")).unwrap();
        assert_eq!(back, vec![1, 2, 3]);
        let err = read_json::<Vec<u32>>(&path, Some("other")).unwrap_err();
        assert!(matches!(err, ArtifactError::HashMismatch { .. }));
    }

    #[test]
    fn missing_file_reports_missing_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let err = read_json::<u32>(&dir.path().join("absent.json"), None).unwrap_err();
        assert!(matches!(err, ArtifactError::MissingCheckpoint(_)));
    }
}
