//! Saved-model documents.
//!
//! A saved model is a JSON object bound to its environment and settings by
//! a fingerprint; it only loads back against the same pair.

use serde::{Deserialize, Serialize};

use super::{Tables, TrainOutcome};
use crate::model::{fingerprint, AlgorithmKind, EnvironmentSpec, Hyperparameters};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModelFile {
    pub format_version: u32,
    pub algorithm: AlgorithmKind,
    pub hyperparameters: Hyperparameters,
    /// Hex SHA-256, see [`crate::model::fingerprint`].
    pub fingerprint: String,
    pub tables: Tables,
    pub episodes_trained: u64,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("unsupported saved-model format version {found} (expected {FORMAT_VERSION})")]
    VersionMismatch { found: u64 },
    #[error(
        "saved model was trained with a different environment or hyperparameters \
         (fingerprint {saved}, current {current})"
    )]
    FingerprintMismatch { saved: String, current: String },
    #[error("malformed saved model: {0}")]
    Malformed(String),
}

/// Serialize a trained outcome. `episodes_trained` counts every episode the
/// tables have seen, including earlier runs they were resumed from.
pub fn save_model(
    outcome: &TrainOutcome,
    env: &EnvironmentSpec,
    hp: &Hyperparameters,
    seed: u64,
    episodes_trained: u64,
) -> String {
    let file = TrainedModelFile {
        format_version: FORMAT_VERSION,
        algorithm: outcome.algorithm,
        hyperparameters: *hp,
        fingerprint: fingerprint(env, hp).to_hex(),
        tables: outcome.tables.clone(),
        episodes_trained,
        seed,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("model serializes");
    text.push('\n');
    text
}

/// Parse a saved model and check it against the current environment and
/// hyperparameters.
pub fn load_model(
    bytes: &[u8],
    env: &EnvironmentSpec,
    hp: &Hyperparameters,
) -> Result<TrainedModelFile, PersistError> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| PersistError::Malformed(e.to_string()))?;
    let version = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| PersistError::Malformed("missing format_version".into()))?;
    if version != u64::from(FORMAT_VERSION) {
        return Err(PersistError::VersionMismatch { found: version });
    }
    let file: TrainedModelFile =
        serde_json::from_value(value).map_err(|e| PersistError::Malformed(e.to_string()))?;

    let current = fingerprint(env, hp).to_hex();
    if file.fingerprint != current {
        return Err(PersistError::FingerprintMismatch {
            saved: file.fingerprint,
            current,
        });
    }
    if !file.tables.is_square(env.states.len()) {
        return Err(PersistError::Malformed(format!(
            "tables do not match {} states",
            env.states.len()
        )));
    }
    Ok(file)
}
