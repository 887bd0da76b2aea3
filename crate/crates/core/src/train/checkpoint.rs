//! Model checkpoints: versioned JSON holding shape + flat value arrays per
//! named parameter, with the config hash embedded via the artifact
//! envelope.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::artifact::{self, ArtifactError};
use crate::config::HeadMode;
use crate::model::LstmDims;
use crate::numeric::{Init, ParamStore};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum CheckpointKind {
    Lm { dims: LstmDims },
    Rep { heads: HeadMode, hidden: usize },
    AttenPtr { hidden: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedParam {
    pub name: String,
    pub shape: Vec<usize>,
    pub init: Init,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub kind: CheckpointKind,
    pub params: Vec<SavedParam>,
}

impl Checkpoint {
    pub fn of(kind: CheckpointKind, store: &ParamStore) -> Checkpoint {
        let params = store
            .names()
            .iter()
            .map(|name| {
                let tensor = store.get(name);
                SavedParam {
                    name: name.clone(),
                    shape: tensor.shape.clone(),
                    init: store.init_policy(name),
                    values: tensor.values.clone(),
                }
            })
            .collect();
        Checkpoint { kind, params }
    }

    /// Rebuild a parameter store with the saved values.
    pub fn into_store(self) -> ParamStore {
        let mut store = ParamStore::new();
        for param in self.params {
            store.register(&param.name, &param.shape, param.init);
            store.get_mut(&param.name).values.copy_from_slice(&param.values);
        }
        store
    }
}

pub fn save_checkpoint(
    path: &Path,
    config_hash: &str,
    kind: CheckpointKind,
    store: &ParamStore,
) -> Result<(), ArtifactError> {
    artifact::write_json(path, config_hash, &Checkpoint::of(kind, store))
}

pub fn load_checkpoint(
    path: &Path,
    config_hash: Option<&str>,
) -> Result<Checkpoint, ArtifactError> {
    artifact::read_json(path, config_hash)
}
