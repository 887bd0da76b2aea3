//! Corpus store: vocabulary with the least-frequent-token UNK policy,
//! deterministic 60/20/20 function splits, and cared-only context windows.

pub mod synthetic;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::artifact::{self, ArtifactError};
use crate::syntax::{FunctionEvents, NodeClass, TokenEvent};

pub const UNK_TEXT: &str = "<UNK>";

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("too few functions: {0} (need at least 5)")]
    TooFewFunctions(usize),
    #[error("split references unknown function id `{0}`")]
    UnknownFunction(String),
}

/// Token ↔ id map. Id 0 is UNK; the `unk_budget` least frequent distinct
/// training tokens (never all of them: at least the most frequent token
/// keeps an id) map to it. Ties at the frequency cutoff break
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    /// Retained tokens in id order; index i holds the token with id i+1.
    tokens: Vec<String>,
    /// Frequency table over the training split (retained and UNK alike).
    freq: BTreeMap<String, u64>,
    unk_count: usize,
    #[serde(skip)]
    ids: HashMap<String, usize>,
}

impl Vocabulary {
    pub const UNK_ID: usize = 0;

    pub fn build<'a>(
        training: impl IntoIterator<Item = &'a FunctionEvents>,
        unk_budget: usize,
    ) -> Result<Vocabulary, CorpusError> {
        let mut freq: BTreeMap<String, u64> = BTreeMap::new();
        for function in training {
            for event in &function.events {
                *freq.entry(event.text.clone()).or_insert(0) += 1;
            }
        }
        if freq.is_empty() {
            return Err(CorpusError::EmptyTrainingSet);
        }
        let distinct = freq.len();
        let unk_count = unk_budget.min(distinct - 1);

        // least frequent first; lexicographic on ties
        let mut by_rarity: Vec<(&String, u64)> = freq.iter().map(|(t, &c)| (t, c)).collect();
        by_rarity.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        let unked: Vec<String> = by_rarity[..unk_count].iter().map(|(t, _)| (*t).clone()).collect();

        // retained ids ordered by descending frequency, lexicographic on ties
        let mut retained: Vec<(&String, u64)> = by_rarity[unk_count..].to_vec();
        retained.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let tokens: Vec<String> = retained.into_iter().map(|(t, _)| t.clone()).collect();
        drop(unked);

        let mut vocab = Vocabulary { tokens, freq, unk_count, ids: HashMap::new() };
        vocab.rebuild_index();
        Ok(vocab)
    }

    fn rebuild_index(&mut self) {
        self.ids = self
            .tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i + 1))
            .collect();
    }

    /// Total id count, UNK included.
    pub fn len(&self) -> usize {
        self.tokens.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unk_count(&self) -> usize {
        self.unk_count
    }

    pub fn distinct_training_tokens(&self) -> usize {
        self.freq.len()
    }

    pub fn encode(&self, token: &str) -> usize {
        self.ids.get(token).copied().unwrap_or(Self::UNK_ID)
    }

    pub fn decode(&self, id: usize) -> &str {
        if id == Self::UNK_ID {
            UNK_TEXT
        } else {
            &self.tokens[id - 1]
        }
    }

    pub fn encode_sequence(&self, events: &[TokenEvent]) -> Vec<usize> {
        events.iter().map(|e| self.encode(&e.text)).collect()
    }

    pub fn save(&self, path: &Path, config_hash: &str) -> Result<(), ArtifactError> {
        artifact::write_json(path, config_hash, self)
    }

    pub fn load(path: &Path, config_hash: Option<&str>) -> Result<Vocabulary, ArtifactError> {
        let mut vocab: Vocabulary = artifact::read_json(path, config_hash)?;
        vocab.rebuild_index();
        Ok(vocab)
    }
}

/// Function sequences partitioned 60/20/20. Raw events are retained so
/// pointer targets and unseen-token evaluation work on true strings.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCorpus {
    pub train: Vec<FunctionEvents>,
    pub validation: Vec<FunctionEvents>,
    pub test: Vec<FunctionEvents>,
}

impl SplitCorpus {
    pub fn function_counts(&self) -> (usize, usize, usize) {
        (self.train.len(), self.validation.len(), self.test.len())
    }
}

/// Deterministic shuffle by seed, then partition by function count:
/// validation and test each take ⌊n/5⌋ functions, the remainder trains.
pub fn split_corpus(functions: Vec<FunctionEvents>, seed: u64) -> Result<SplitCorpus, CorpusError> {
    let n = functions.len();
    if n < 5 {
        return Err(CorpusError::TooFewFunctions(n));
    }
    let mut shuffled = functions;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffled.shuffle(&mut rng);

    let n_val = n / 5;
    let n_test = n / 5;
    let n_train = n - n_val - n_test;
    let test = shuffled.split_off(n_train + n_val);
    let validation = shuffled.split_off(n_train);
    Ok(SplitCorpus { train: shuffled, validation, test })
}

/// Persisted form of a split: function-id lists per split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitIds {
    pub seed: u64,
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

impl SplitIds {
    pub fn of(corpus: &SplitCorpus, seed: u64) -> SplitIds {
        let ids = |fns: &[FunctionEvents]| fns.iter().map(|f| f.id.clone()).collect();
        SplitIds {
            seed,
            train: ids(&corpus.train),
            validation: ids(&corpus.validation),
            test: ids(&corpus.test),
        }
    }

    /// Reassemble a split from the full function list.
    pub fn resolve(&self, functions: Vec<FunctionEvents>) -> Result<SplitCorpus, CorpusError> {
        let mut by_id: HashMap<String, FunctionEvents> =
            functions.into_iter().map(|f| (f.id.clone(), f)).collect();
        let mut take = |ids: &[String]| -> Result<Vec<FunctionEvents>, CorpusError> {
            ids.iter()
                .map(|id| by_id.remove(id).ok_or_else(|| CorpusError::UnknownFunction(id.clone())))
                .collect()
        };
        Ok(SplitCorpus {
            train: take(&self.train)?,
            validation: take(&self.validation)?,
            test: take(&self.test)?,
        })
    }

    pub fn save(&self, path: &Path, config_hash: &str) -> Result<(), ArtifactError> {
        artifact::write_json(path, config_hash, self)
    }

    pub fn load(path: &Path, config_hash: Option<&str>) -> Result<SplitIds, ArtifactError> {
        artifact::read_json(path, config_hash)
    }
}

/// Positions of cared content tokens among the previous `m` raw tokens of
/// `pos`, oldest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextWindow {
    pub positions: Vec<usize>,
    pub m: usize,
}

pub fn context_window(events: &[TokenEvent], pos: usize, m: usize) -> ContextWindow {
    assert!(m >= 1, "context length must be >= 1");
    assert!(pos <= events.len(), "position out of range");
    let lo = pos.saturating_sub(m);
    let positions = (lo..pos).filter(|&i| events[i].class == NodeClass::Cared).collect();
    ContextWindow { positions, m }
}
