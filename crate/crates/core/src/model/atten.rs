//! Attention-pointer comparator: additive attention scores over the cared
//! context plus a sigmoid mixture gate:
//!   u_k = v^T tanh(A h_k + B h_next)
//!   g   = sigmoid(w_g^T h_next + b_g)
//! The final candidate list mixes pointer and LM mass exactly like the
//! repetition head, with p_rep := g.

use crate::corpus::Vocabulary;
use crate::numeric::graph::{Graph, Vid};
use crate::numeric::{stable_softmax, Init, ParamStore};

use super::{mix_distributions, ContextStates};

#[derive(Debug, Clone, Copy)]
pub struct AttenPtrModel {
    pub hidden: usize,
}

impl AttenPtrModel {
    pub fn new(hidden: usize) -> Self {
        AttenPtrModel { hidden }
    }

    /// The score path (A, B, v) starts at small uniform values: at the
    /// all-zero point both v and tanh(...) vanish, so no gradient could ever
    /// reach them. The gate starts at zero (g = 0.5).
    pub fn register(&self, store: &mut ParamStore) {
        let small = Init::Uniform { lo: -0.1, hi: 0.1 };
        store.register("ptr.a", &[self.hidden, self.hidden], small);
        store.register("ptr.b", &[self.hidden, self.hidden], small);
        store.register("ptr.v", &[self.hidden], small);
        store.register("ptr.gate.w", &[self.hidden], Init::Zero);
        store.register("ptr.gate.b", &[1], Init::Zero);
    }

    fn matvec(store: &ParamStore, name: &str, x: &[f64]) -> Vec<f64> {
        let w = store.get(name);
        (0..w.rows())
            .map(|r| w.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scores(&self, store: &ParamStore, ctx: &ContextStates) -> Vec<f64> {
        assert!(!ctx.is_empty(), "attention over empty context");
        let v = store.get("ptr.v");
        let bh = Self::matvec(store, "ptr.b", &ctx.h_next);
        ctx.states
            .iter()
            .map(|h| {
                let ah = Self::matvec(store, "ptr.a", h);
                ah.iter()
                    .zip(&bh)
                    .zip(&v.values)
                    .map(|((a, b), vv)| vv * (a + b).tanh())
                    .sum()
            })
            .collect()
    }

    pub fn pointer_probs(&self, store: &ParamStore, ctx: &ContextStates) -> Vec<f64> {
        stable_softmax(&self.scores(store, ctx))
    }

    pub fn gate(&self, store: &ParamStore, h_next: &[f64]) -> f64 {
        let w = store.get("ptr.gate.w");
        let b = store.get("ptr.gate.b").values[0];
        let s: f64 = w.values.iter().zip(h_next).map(|(a, b)| a * b).sum::<f64>() + b;
        1.0 / (1.0 + (-s).exp())
    }

    /// Ranked candidates: pointer mass gated by g against the LM mass.
    pub fn forward(
        &self,
        store: &ParamStore,
        ctx: &ContextStates,
        lm_dist: &[f64],
        vocab: &Vocabulary,
    ) -> Vec<(String, f64)> {
        if ctx.is_empty() {
            return mix_distributions(lm_dist, vocab, &[], 0.0, &[]);
        }
        let pointer = self.pointer_probs(store, ctx);
        let gate = self.gate(store, &ctx.h_next);
        let ctx_tokens: Vec<&str> = ctx.token_refs.iter().map(|t| t.text.as_str()).collect();
        mix_distributions(lm_dist, vocab, &pointer, gate, &ctx_tokens)
    }

    // ---- graph (training) path ------------------------------------------

    pub fn scores_graph(&self, g: &mut Graph, ctx_states: &[Vid], h_next: Vid) -> Vid {
        let bh = g.matvec_param("ptr.b", h_next);
        let scores: Vec<Vid> = ctx_states
            .iter()
            .map(|&h| {
                let ah = g.matvec_param("ptr.a", h);
                let sum = g.add(ah, bh);
                let t = g.tanh(sum);
                g.dot_param("ptr.v", t)
            })
            .collect();
        g.stack(scores)
    }

    /// Stacked [gate_score, 0] logits; softmax-CE against [y, 1-y] is the
    /// sigmoid cross-entropy of the gate.
    pub fn gate_logits_graph(&self, g: &mut Graph, h_next: Vid) -> Vid {
        let s = g.dot_param("ptr.gate.w", h_next);
        let s = g.add_param("ptr.gate.b", s);
        let zero = g.value(vec![0.0]);
        let parts = vec![(s, 1.0)];
        let s_scalar = g.sum_scaled(parts);
        g.stack(vec![s_scalar, zero])
    }
}
