//! Run configuration: training hyperparameters, head routing, paths and the
//! config hash embedded in every artifact. Configs load from a plain-text
//! `key = value` file with command-line overrides; unknown keys are
//! rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: String, message: String },
    #[error("malformed config line {line}: `{text}` (expected `key = value`)")]
    MalformedLine { line: usize, text: String },
}

/// Repetition-head routing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum HeadMode {
    /// One head handles every cared token.
    Single,
    /// Dedicated heads for the listed parent kinds; everything else routes
    /// to a shared default head.
    PerKind { kinds: Vec<String> },
    /// One head, but context entries that are not variables are removed
    /// before pointer scoring.
    VariablesOnly,
}

impl HeadMode {
    pub fn label(&self) -> &'static str {
        match self {
            HeadMode::Single => "single",
            HeadMode::PerKind { .. } => "per-kind",
            HeadMode::VariablesOnly => "variables-only",
        }
    }
}

impl fmt::Display for HeadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeadMode::PerKind { kinds } => write!(f, "per-kind:{}", kinds.join(",")),
            other => f.write_str(other.label()),
        }
    }
}

impl FromStr for HeadMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(HeadMode::Single),
            "variables-only" => Ok(HeadMode::VariablesOnly),
            "per-kind" => Ok(HeadMode::PerKind { kinds: Vec::new() }),
            other => {
                if let Some(kinds) = other.strip_prefix("per-kind:") {
                    Ok(HeadMode::PerKind {
                        kinds: kinds.split(',').map(|k| k.trim().to_string()).collect(),
                    })
                } else {
                    Err(format!(
                        "expected single | per-kind[:Kind,...] | variables-only, got `{other}`"
                    ))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSelector {
    Lstm,
    Rep,
    AttenPtr,
}

impl ModelSelector {
    pub fn label(self) -> &'static str {
        match self {
            ModelSelector::Lstm => "lstm",
            ModelSelector::Rep => "rep",
            ModelSelector::AttenPtr => "atten-ptr",
        }
    }
}

impl FromStr for ModelSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lstm" => Ok(ModelSelector::Lstm),
            "rep" => Ok(ModelSelector::Rep),
            "atten-ptr" | "attenptr" | "ptr" => Ok(ModelSelector::AttenPtr),
            other => Err(format!("expected lstm | rep | atten-ptr, got `{other}`")),
        }
    }
}

/// Everything that affects training and evaluation artifacts. The config
/// hash is computed over this struct alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Context length m: raw tokens scanned for cared context entries.
    pub context_len: usize,
    /// Early stopping: consecutive non-improving validation epochs allowed.
    pub patience: usize,
    /// Safety cap on epochs beyond the patience rule.
    pub max_epochs: usize,
    pub seed: u64,
    pub learning_rate: f64,
    pub hidden_size: usize,
    pub embed_size: usize,
    /// Component-wise gradient clamp bounds.
    pub clip_lo: f64,
    pub clip_hi: f64,
    /// How many least-frequent training tokens become UNK.
    pub unk_budget: usize,
    pub heads: HeadMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            context_len: 25,
            patience: 10,
            max_epochs: 200,
            seed: 42,
            learning_rate: 0.1,
            hidden_size: 128,
            embed_size: 128,
            clip_lo: -1e6,
            clip_hi: 1e6,
            unk_budget: 1000,
            heads: HeadMode::Single,
        }
    }
}

impl TrainConfig {
    /// Hex SHA-256 of the canonical JSON form; embedded in every artifact.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value.parse().map_err(|e: T::Err| ConfigError::InvalidValue {
                key: key.to_string(),
                message: e.to_string(),
            })
        }
        match key {
            "context_len" => self.context_len = parse(key, value)?,
            "patience" => self.patience = parse(key, value)?,
            "max_epochs" => self.max_epochs = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "learning_rate" => self.learning_rate = parse(key, value)?,
            "hidden_size" => self.hidden_size = parse(key, value)?,
            "embed_size" => self.embed_size = parse(key, value)?,
            "clip_lo" => self.clip_lo = parse(key, value)?,
            "clip_hi" => self.clip_hi = parse(key, value)?,
            "unk_budget" => self.unk_budget = parse(key, value)?,
            "heads" => self.heads = parse(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }
}

/// Full CLI run configuration: hyperparameters plus paths and model choice.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub train: TrainConfig,
    pub corpus_dir: PathBuf,
    pub work_dir: PathBuf,
    pub model: ModelSelector,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            train: TrainConfig::default(),
            corpus_dir: PathBuf::from("corpus"),
            work_dir: PathBuf::from("work"),
            model: ModelSelector::Rep,
        }
    }
}

impl RunConfig {
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "corpus_dir" => self.corpus_dir = PathBuf::from(value),
            "work_dir" => self.work_dir = PathBuf::from(value),
            "model" => {
                self.model = value.parse().map_err(|e: String| ConfigError::InvalidValue {
                    key: key.to_string(),
                    message: e,
                })?
            }
            _ => self.train.apply_kv(key, value)?,
        }
        Ok(())
    }

    /// Parse a `key = value` config file body. `#` starts a comment.
    pub fn parse_file(&mut self, body: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in body.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::MalformedLine {
                    line: lineno + 1,
                    text: raw.trim().to_string(),
                });
            };
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

/// Ordered key-value dump used by diagnostics and tests.
pub fn config_keys(config: &RunConfig) -> BTreeMap<&'static str, String> {
    let t = &config.train;
    BTreeMap::from([
        ("context_len", t.context_len.to_string()),
        ("patience", t.patience.to_string()),
        ("max_epochs", t.max_epochs.to_string()),
        ("seed", t.seed.to_string()),
        ("learning_rate", t.learning_rate.to_string()),
        ("hidden_size", t.hidden_size.to_string()),
        ("embed_size", t.embed_size.to_string()),
        ("clip_lo", t.clip_lo.to_string()),
        ("clip_hi", t.clip_hi.to_string()),
        ("unk_budget", t.unk_budget.to_string()),
        ("heads", t.heads.to_string()),
        ("corpus_dir", config.corpus_dir.display().to_string()),
        ("work_dir", config.work_dir.display().to_string()),
        ("model", config.model.label().to_string()),
    ])
}
