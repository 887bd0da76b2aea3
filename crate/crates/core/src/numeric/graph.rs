//! Eager tape for reverse-mode differentiation over vector values.
//!
//! Forward values are computed as nodes are appended; `backward` walks the
//! tape in reverse and accumulates parameter gradients keyed by name. The
//! op set is exactly what the LSTM, the repetition head and the attention
//! pointer need.

use std::collections::HashMap;

use super::{stable_softmax, ParamStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vid(usize);

enum Op {
    /// Constant leaf (inputs, frozen states).
    Value,
    /// W[r×c] · x, with W a named parameter.
    MatVecParam { name: String, x: Vid },
    /// One row of a named embedding matrix.
    EmbedRow { name: String, row: usize },
    /// x + b, with b a named parameter.
    AddParam { name: String, x: Vid },
    /// w · x -> scalar, with w a named parameter.
    DotParam { name: String, x: Vid },
    Add { a: Vid, b: Vid },
    Mul { a: Vid, b: Vid },
    Dot { a: Vid, b: Vid },
    Sigmoid { x: Vid },
    Tanh { x: Vid },
    /// Scalars gathered into one vector.
    Stack { parts: Vec<Vid> },
    /// Σ cᵢ · scalarᵢ.
    SumScaled { parts: Vec<(Vid, f64)> },
    /// Softmax cross-entropy against a fixed distribution; caches probs.
    SoftmaxCe { logits: Vid, target: Vec<f64>, probs: Vec<f64> },
}

struct Node {
    op: Op,
    val: Vec<f64>,
    grad: Vec<f64>,
}

pub struct Graph<'a> {
    store: &'a ParamStore,
    nodes: Vec<Node>,
}

impl<'a> Graph<'a> {
    pub fn new(store: &'a ParamStore) -> Self {
        Graph { store, nodes: Vec::new() }
    }

    pub fn val(&self, id: Vid) -> &[f64] {
        &self.nodes[id.0].val
    }

    pub fn scalar(&self, id: Vid) -> f64 {
        debug_assert_eq!(self.nodes[id.0].val.len(), 1);
        self.nodes[id.0].val[0]
    }

    fn push(&mut self, op: Op, val: Vec<f64>) -> Vid {
        let grad = vec![0.0; val.len()];
        self.nodes.push(Node { op, val, grad });
        Vid(self.nodes.len() - 1)
    }

    pub fn value(&mut self, v: Vec<f64>) -> Vid {
        self.push(Op::Value, v)
    }

    pub fn matvec_param(&mut self, name: &str, x: Vid) -> Vid {
        let w = self.store.get(name);
        let (rows, cols) = (w.rows(), w.cols());
        let xv = &self.nodes[x.0].val;
        assert_eq!(xv.len(), cols, "matvec dims for `{name}`");
        let mut out = vec![0.0; rows];
        for r in 0..rows {
            let row = &w.values[r * cols..(r + 1) * cols];
            out[r] = row.iter().zip(xv).map(|(a, b)| a * b).sum();
        }
        self.push(Op::MatVecParam { name: name.to_string(), x }, out)
    }

    pub fn embed_row(&mut self, name: &str, row: usize) -> Vid {
        let e = self.store.get(name);
        let val = e.row(row).to_vec();
        self.push(Op::EmbedRow { name: name.to_string(), row }, val)
    }

    pub fn add_param(&mut self, name: &str, x: Vid) -> Vid {
        let b = self.store.get(name);
        let xv = &self.nodes[x.0].val;
        assert_eq!(xv.len(), b.len(), "bias dims for `{name}`");
        let val = xv.iter().zip(&b.values).map(|(a, b)| a + b).collect();
        self.push(Op::AddParam { name: name.to_string(), x }, val)
    }

    pub fn dot_param(&mut self, name: &str, x: Vid) -> Vid {
        let w = self.store.get(name);
        let xv = &self.nodes[x.0].val;
        assert_eq!(xv.len(), w.len(), "dot dims for `{name}`");
        let val = vec![w.values.iter().zip(xv).map(|(a, b)| a * b).sum()];
        self.push(Op::DotParam { name: name.to_string(), x }, val)
    }

    pub fn add(&mut self, a: Vid, b: Vid) -> Vid {
        let val = self.nodes[a.0]
            .val
            .iter()
            .zip(&self.nodes[b.0].val)
            .map(|(x, y)| x + y)
            .collect();
        self.push(Op::Add { a, b }, val)
    }

    pub fn mul(&mut self, a: Vid, b: Vid) -> Vid {
        let val = self.nodes[a.0]
            .val
            .iter()
            .zip(&self.nodes[b.0].val)
            .map(|(x, y)| x * y)
            .collect();
        self.push(Op::Mul { a, b }, val)
    }

    pub fn dot(&mut self, a: Vid, b: Vid) -> Vid {
        let val = vec![self.nodes[a.0]
            .val
            .iter()
            .zip(&self.nodes[b.0].val)
            .map(|(x, y)| x * y)
            .sum()];
        self.push(Op::Dot { a, b }, val)
    }

    pub fn sigmoid(&mut self, x: Vid) -> Vid {
        let val = self.nodes[x.0].val.iter().map(|v| 1.0 / (1.0 + (-v).exp())).collect();
        self.push(Op::Sigmoid { x }, val)
    }

    pub fn tanh(&mut self, x: Vid) -> Vid {
        let val = self.nodes[x.0].val.iter().map(|v| v.tanh()).collect();
        self.push(Op::Tanh { x }, val)
    }

    pub fn stack(&mut self, parts: Vec<Vid>) -> Vid {
        let val = parts.iter().map(|p| self.scalar(*p)).collect();
        self.push(Op::Stack { parts }, val)
    }

    pub fn sum_scaled(&mut self, parts: Vec<(Vid, f64)>) -> Vid {
        let val = vec![parts.iter().map(|(p, c)| c * self.scalar(*p)).sum()];
        self.push(Op::SumScaled { parts }, val)
    }

    /// Mean of scalar losses.
    pub fn mean(&mut self, parts: Vec<Vid>) -> Vid {
        let n = parts.len().max(1) as f64;
        let scaled = parts.into_iter().map(|p| (p, 1.0 / n)).collect();
        self.sum_scaled(scaled)
    }

    pub fn softmax_ce(&mut self, logits: Vid, target: Vec<f64>) -> Vid {
        let lv = &self.nodes[logits.0].val;
        assert_eq!(lv.len(), target.len(), "softmax-ce dims");
        debug_assert!((target.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        let max = lv.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_sum: f64 = lv.iter().map(|&x| (x - max).exp()).sum::<f64>().ln();
        let loss = -target
            .iter()
            .zip(lv)
            .map(|(t, x)| t * (x - max - log_sum))
            .sum::<f64>();
        let probs = stable_softmax(lv);
        self.push(Op::SoftmaxCe { logits, target, probs }, vec![loss])
    }

    pub fn softmax_ce_index(&mut self, logits: Vid, class: usize) -> Vid {
        let n = self.nodes[logits.0].val.len();
        let mut target = vec![0.0; n];
        target[class] = 1.0;
        self.softmax_ce(logits, target)
    }

    /// Reverse pass from a scalar loss; returns accumulated parameter
    /// gradients sorted by name.
    pub fn backward(mut self, loss: Vid) -> Vec<(String, Vec<f64>)> {
        assert_eq!(self.nodes[loss.0].val.len(), 1, "loss must be scalar");
        let mut param_grads: HashMap<String, Vec<f64>> = HashMap::new();
        self.nodes[loss.0].grad[0] = 1.0;

        for i in (0..self.nodes.len()).rev() {
            let grad = std::mem::take(&mut self.nodes[i].grad);
            if grad.iter().all(|&g| g == 0.0) {
                continue;
            }
            // split borrows: read-only value access via raw parts
            match &self.nodes[i].op {
                Op::Value => {}
                Op::MatVecParam { name, x } => {
                    let x = *x;
                    let name = name.clone();
                    let w = self.store.get(&name);
                    let (rows, cols) = (w.rows(), w.cols());
                    let xv = self.nodes[x.0].val.clone();
                    let pg = param_grads
                        .entry(name.clone())
                        .or_insert_with(|| vec![0.0; w.len()]);
                    for r in 0..rows {
                        for c in 0..cols {
                            pg[r * cols + c] += grad[r] * xv[c];
                        }
                    }
                    let wvals = &self.store.get(&name).values;
                    for c in 0..cols {
                        let mut acc = 0.0;
                        for r in 0..rows {
                            acc += wvals[r * cols + c] * grad[r];
                        }
                        self.nodes[x.0].grad[c] += acc;
                    }
                }
                Op::EmbedRow { name, row } => {
                    let e = self.store.get(name);
                    let cols = e.cols();
                    let pg = param_grads
                        .entry(name.clone())
                        .or_insert_with(|| vec![0.0; e.len()]);
                    for c in 0..cols {
                        pg[row * cols + c] += grad[c];
                    }
                }
                Op::AddParam { name, x } => {
                    let x = *x;
                    let b = self.store.get(name);
                    let pg = param_grads
                        .entry(name.clone())
                        .or_insert_with(|| vec![0.0; b.len()]);
                    for (p, g) in pg.iter_mut().zip(&grad) {
                        *p += g;
                    }
                    for (xg, g) in self.nodes[x.0].grad.iter_mut().zip(&grad) {
                        *xg += g;
                    }
                }
                Op::DotParam { name, x } => {
                    let x = *x;
                    let name = name.clone();
                    let g0 = grad[0];
                    let w = self.store.get(&name);
                    let xv = self.nodes[x.0].val.clone();
                    let pg = param_grads
                        .entry(name.clone())
                        .or_insert_with(|| vec![0.0; w.len()]);
                    for (p, xval) in pg.iter_mut().zip(&xv) {
                        *p += g0 * xval;
                    }
                    let wvals = self.store.get(&name).values.clone();
                    for (xg, wv) in self.nodes[x.0].grad.iter_mut().zip(&wvals) {
                        *xg += g0 * wv;
                    }
                }
                Op::Add { a, b } => {
                    let (a, b) = (*a, *b);
                    for (ag, g) in self.nodes[a.0].grad.iter_mut().zip(&grad) {
                        *ag += g;
                    }
                    for (bg, g) in self.nodes[b.0].grad.iter_mut().zip(&grad) {
                        *bg += g;
                    }
                }
                Op::Mul { a, b } => {
                    let (a, b) = (*a, *b);
                    let av = self.nodes[a.0].val.clone();
                    let bv = self.nodes[b.0].val.clone();
                    for ((ag, g), bval) in self.nodes[a.0].grad.iter_mut().zip(&grad).zip(&bv) {
                        *ag += g * bval;
                    }
                    for ((bg, g), aval) in self.nodes[b.0].grad.iter_mut().zip(&grad).zip(&av) {
                        *bg += g * aval;
                    }
                }
                Op::Dot { a, b } => {
                    let (a, b) = (*a, *b);
                    let g0 = grad[0];
                    let av = self.nodes[a.0].val.clone();
                    let bv = self.nodes[b.0].val.clone();
                    for (ag, bval) in self.nodes[a.0].grad.iter_mut().zip(&bv) {
                        *ag += g0 * bval;
                    }
                    for (bg, aval) in self.nodes[b.0].grad.iter_mut().zip(&av) {
                        *bg += g0 * aval;
                    }
                }
                Op::Sigmoid { x } => {
                    let x = *x;
                    let yv = self.nodes[i].val.clone();
                    for ((xg, g), y) in self.nodes[x.0].grad.iter_mut().zip(&grad).zip(&yv) {
                        *xg += g * y * (1.0 - y);
                    }
                }
                Op::Tanh { x } => {
                    let x = *x;
                    let yv = self.nodes[i].val.clone();
                    for ((xg, g), y) in self.nodes[x.0].grad.iter_mut().zip(&grad).zip(&yv) {
                        *xg += g * (1.0 - y * y);
                    }
                }
                Op::Stack { parts } => {
                    let parts = parts.clone();
                    for (k, part) in parts.iter().enumerate() {
                        self.nodes[part.0].grad[0] += grad[k];
                    }
                }
                Op::SumScaled { parts } => {
                    let parts = parts.clone();
                    let g0 = grad[0];
                    for (part, c) in parts {
                        self.nodes[part.0].grad[0] += g0 * c;
                    }
                }
                Op::SoftmaxCe { logits, target, probs } => {
                    let logits = *logits;
                    let g0 = grad[0];
                    let deltas: Vec<f64> =
                        probs.iter().zip(target).map(|(p, t)| g0 * (p - t)).collect();
                    for (lg, d) in self.nodes[logits.0].grad.iter_mut().zip(deltas) {
                        *lg += d;
                    }
                }
            }
        }

        let mut out: Vec<(String, Vec<f64>)> = param_grads.into_iter().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Init;

    #[test]
    fn linear_gradient_is_exact() {
        // f(w) = w · x with x fixed: df/dw = x exactly
        let mut store = ParamStore::new();
        store.register("w", &[3], Init::Zero);
        store.get_mut("w").values.copy_from_slice(&[0.5, -1.0, 2.0]);
        let x = vec![1.0, 2.0, 3.0];

        let g = {
            let mut g = Graph::new(&store);
            let xv = g.value(x.clone());
            let y = g.dot_param("w", xv);
            g.backward(y)
        };
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].0, "w");
        for (got, want) in g[0].1.iter().zip(&x) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn matvec_and_softmax_ce_backward_match_manual_formula() {
        let mut store = ParamStore::new();
        store.register("w", &[2, 3], Init::Zero);
        store.get_mut("w").values.copy_from_slice(&[0.1, 0.2, -0.3, 0.4, -0.5, 0.6]);
        let x = vec![1.0, -1.0, 0.5];

        let (loss, grads) = {
            let mut g = Graph::new(&store);
            let xv = g.value(x.clone());
            let logits = g.matvec_param("w", xv);
            let loss = g.softmax_ce_index(logits, 1);
            (g.scalar(loss), g.backward(loss))
        };
        assert!(loss > 0.0);
        // manual: dL/dW = (p - onehot) ⊗ x
        let w = store.get("w");
        let mut logits = [0.0f64; 2];
        for r in 0..2 {
            logits[r] = w.row(r).iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        let probs = stable_softmax(&logits);
        let delta = [probs[0], probs[1] - 1.0];
        let wg = &grads.iter().find(|(n, _)| n == "w").unwrap().1;
        for r in 0..2 {
            for c in 0..3 {
                assert!((wg[r * 3 + c] - delta[r] * x[c]).abs() < 1e-12);
            }
        }
    }
}
