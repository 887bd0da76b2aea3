//! Minimal dense f64 tensor store with reverse-mode gradients.
//!
//! Initialization policy: embeddings uniform in [-1, 1]; all other
//! parameters zero, with two documented exceptions (LSTM forget-gate bias
//! 1.0, output projection uniform in [-0.1, 0.1]) plus the attention
//! baseline's score parameters, which cannot escape an all-zero saddle.
//! Gradient clipping is component-wise value clamping.

pub mod graph;
mod gradcheck;

pub use gradcheck::{grad_check, GradCheckReport, ParamCheck};

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum NumericError {
    #[error("non-finite loss: {0}")]
    NonFinite(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense array with a same-shape gradient accumulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
    #[serde(skip)]
    pub grad: Vec<f64>,
}

impl Tensor {
    pub fn zeros(shape: &[usize]) -> Tensor {
        let len = shape.iter().product();
        Tensor { shape: shape.to_vec(), values: vec![0.0; len], grad: vec![0.0; len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rows of a 2-D tensor (or 1 for vectors).
    pub fn rows(&self) -> usize {
        if self.shape.len() == 2 {
            self.shape[0]
        } else {
            1
        }
    }

    pub fn cols(&self) -> usize {
        *self.shape.last().unwrap_or(&0)
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let c = self.cols();
        &self.values[r * c..(r + 1) * c]
    }
}

/// Initialization policy attached to each named parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Init {
    Zero,
    Const(f64),
    Uniform { lo: f64, hi: f64 },
}

/// Named parameters in registration order (the order seeds the RNG stream,
/// so it is part of the reproducibility contract).
#[derive(Debug, Clone, Default)]
pub struct ParamStore {
    names: Vec<String>,
    params: HashMap<String, (Tensor, Init)>,
}

impl ParamStore {
    pub fn new() -> ParamStore {
        ParamStore::default()
    }

    pub fn register(&mut self, name: &str, shape: &[usize], init: Init) {
        assert!(
            !self.params.contains_key(name),
            "parameter `{name}` registered twice"
        );
        self.names.push(name.to_string());
        self.params.insert(name.to_string(), (Tensor::zeros(shape), init));
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> &Tensor {
        &self.params.get(name).unwrap_or_else(|| panic!("unknown parameter `{name}`")).0
    }

    pub fn get_mut(&mut self, name: &str) -> &mut Tensor {
        &mut self.params.get_mut(name).unwrap_or_else(|| panic!("unknown parameter `{name}`")).0
    }

    pub fn init_policy(&self, name: &str) -> Init {
        self.params[name].1
    }

    /// Apply every parameter's init policy, in registration order, from one
    /// seeded generator.
    pub fn init(&mut self, seed: u64) {
        let mut rng = seeded_rng(seed);
        for name in &self.names {
            let (tensor, init) = self.params.get_mut(name).expect("registered");
            match *init {
                Init::Zero => tensor.values.iter_mut().for_each(|v| *v = 0.0),
                Init::Const(c) => tensor.values.iter_mut().for_each(|v| *v = c),
                Init::Uniform { lo, hi } => {
                    tensor.values.iter_mut().for_each(|v| *v = rng.gen_range(lo..hi))
                }
            }
            tensor.grad.iter_mut().for_each(|g| *g = 0.0);
        }
    }

    pub fn zero_grads(&mut self) {
        for name in &self.names {
            let (tensor, _) = self.params.get_mut(name).expect("registered");
            tensor.grad.iter_mut().for_each(|g| *g = 0.0);
        }
    }

    pub fn accumulate_grads(&mut self, grads: Vec<(String, Vec<f64>)>) {
        for (name, grad) in grads {
            let tensor = self.get_mut(&name);
            assert_eq!(tensor.grad.len(), grad.len(), "gradient shape for `{name}`");
            for (g, d) in tensor.grad.iter_mut().zip(grad) {
                *g += d;
            }
        }
    }

    /// Plain SGD: values -= lr * grad.
    pub fn sgd_step(&mut self, lr: f64) {
        for name in &self.names {
            let (tensor, _) = self.params.get_mut(name).expect("registered");
            for (v, g) in tensor.values.iter_mut().zip(&tensor.grad) {
                *v -= lr * g;
            }
        }
    }

    pub fn total_params(&self) -> usize {
        self.names.iter().map(|n| self.get(n).len()).sum()
    }

    /// Bit-exact snapshot of values, in registration order.
    pub fn snapshot(&self) -> Vec<(String, Vec<f64>)> {
        self.names.iter().map(|n| (n.clone(), self.get(n).values.clone())).collect()
    }

    pub fn restore(&mut self, snapshot: &[(String, Vec<f64>)]) {
        for (name, values) in snapshot {
            let tensor = self.get_mut(name);
            assert_eq!(tensor.values.len(), values.len());
            tensor.values.copy_from_slice(values);
        }
    }
}

/// Component-wise clamp of every gradient in the store; values untouched.
pub fn clip_gradients(store: &mut ParamStore, lo: f64, hi: f64) {
    assert!(lo < hi, "clip bounds must satisfy lo < hi");
    let names: Vec<String> = store.names().to_vec();
    for name in names {
        for g in store.get_mut(&name).grad.iter_mut() {
            *g = g.clamp(lo, hi);
        }
    }
}

/// Max-shifted softmax: order-preserving, sums to 1, no overflow on finite
/// input.
pub fn stable_softmax(logits: &[f64]) -> Vec<f64> {
    assert!(!logits.is_empty(), "softmax of empty vector");
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Log-softmax companion used for stable cross-entropy.
fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_sum: f64 = logits.iter().map(|&x| (x - max).exp()).sum::<f64>().ln();
    logits.iter().map(|&x| x - max - log_sum).collect()
}

/// Cross-entropy of softmax(logits) against a probability-vector target.
/// Returns (loss, gradient w.r.t. logits = softmax - target). Asserts the
/// target is a normalized distribution.
pub fn softmax_cross_entropy(logits: &[f64], target: &[f64]) -> (f64, Vec<f64>) {
    assert_eq!(logits.len(), target.len(), "logits/target length");
    let mass: f64 = target.iter().sum();
    assert!(
        (mass - 1.0).abs() < 1e-6 && target.iter().all(|&t| t >= 0.0),
        "target must be a probability vector (mass {mass})"
    );
    let logp = log_softmax(logits);
    let loss = -target.iter().zip(&logp).map(|(t, lp)| t * lp).sum::<f64>();
    let probs = stable_softmax(logits);
    let grad = probs.iter().zip(target).map(|(p, t)| p - t).collect();
    (loss, grad)
}
