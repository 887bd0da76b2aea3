//! The repetition head: a bilinear pointer over cared context states plus a
//! two-way repetition decision.
//!
//! For context states h_0..h_m and prediction-point state h_next:
//!   P(k, next) = exp(h_k^T W h_next) / Σ_j exp(h_j^T W h_next)
//!   mk         = argmax_k P(k, next)          (ties -> lowest index)
//!   P(repeated) = exp(h_mk^T V1 h_next) / (exp(h_mk^T V1 h_next) + exp(h_mk^T V2 h_next))
//! both computed as max-shifted softmaxes. Heads can be isolated per token
//! kind, or restricted to variables-only context.

use crate::config::{ConfigError, HeadMode};
use crate::numeric::graph::{Graph, Vid};
use crate::numeric::{stable_softmax, Init, ParamStore};
use crate::syntax::NodeKind;

use super::ContextStates;

const DEFAULT_GROUP: &str = "default";
const SINGLE_GROUP: &str = "all";

/// A set of isolated repetition heads and the routing between them. Each
/// group owns three hidden×hidden bilinear forms: `rep.<group>.w`,
/// `rep.<group>.v1`, `rep.<group>.v2`.
#[derive(Debug, Clone)]
pub struct RepHeadSet {
    pub mode: HeadMode,
    pub hidden: usize,
    groups: Vec<String>,
}

impl RepHeadSet {
    /// Validates per-kind routing at load time: listed kinds must be known
    /// node kinds.
    pub fn new(mode: HeadMode, hidden: usize) -> Result<Self, ConfigError> {
        let groups = match &mode {
            HeadMode::Single | HeadMode::VariablesOnly => vec![SINGLE_GROUP.to_string()],
            HeadMode::PerKind { kinds } => {
                let mut groups = Vec::new();
                for kind in kinds {
                    if NodeKind::from_name(kind).is_none() {
                        return Err(ConfigError::InvalidValue {
                            key: "heads".to_string(),
                            message: format!("unknown node kind `{kind}`"),
                        });
                    }
                    if !groups.contains(kind) {
                        groups.push(kind.clone());
                    }
                }
                groups.push(DEFAULT_GROUP.to_string());
                groups
            }
        };
        Ok(RepHeadSet { mode, hidden, groups })
    }

    pub fn groups(&self) -> &[String] {
        &self.groups
    }

    pub fn variables_only(&self) -> bool {
        self.mode == HeadMode::VariablesOnly
    }

    /// Every cared kind routes to exactly one head.
    pub fn group_for(&self, parent_kind: &str) -> &str {
        match &self.mode {
            HeadMode::Single | HeadMode::VariablesOnly => SINGLE_GROUP,
            HeadMode::PerKind { .. } => self
                .groups
                .iter()
                .find(|g| g.as_str() == parent_kind)
                .map_or(DEFAULT_GROUP, |g| g.as_str()),
        }
    }

    pub fn register(&self, store: &mut ParamStore) {
        for group in &self.groups {
            for param in ["w", "v1", "v2"] {
                store.register(
                    &format!("rep.{group}.{param}"),
                    &[self.hidden, self.hidden],
                    Init::Zero,
                );
            }
        }
    }

    fn bilinear_scores(
        &self,
        store: &ParamStore,
        states: &[Vec<f64>],
        h_next: &[f64],
        param: &str,
    ) -> Vec<f64> {
        let w = store.get(param);
        let cols = w.cols();
        // W h_next once, then one dot per context entry
        let wh: Vec<f64> = (0..w.rows())
            .map(|r| w.row(r).iter().zip(h_next).map(|(a, b)| a * b).sum())
            .collect();
        debug_assert_eq!(cols, h_next.len());
        states
            .iter()
            .map(|h| h.iter().zip(&wh).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Pointer distribution over the context positions.
    pub fn pointer_probs(&self, store: &ParamStore, ctx: &ContextStates, group: &str) -> Vec<f64> {
        assert!(!ctx.is_empty(), "pointer over empty context");
        let scores =
            self.bilinear_scores(store, &ctx.states, &ctx.h_next, &format!("rep.{group}.w"));
        stable_softmax(&scores)
    }

    /// P(repeated) for the winning context entry `mk`.
    pub fn decision(&self, store: &ParamStore, ctx: &ContextStates, mk: usize, group: &str) -> f64 {
        let h_mk = std::slice::from_ref(&ctx.states[mk]);
        let s1 = self.bilinear_scores(store, h_mk, &ctx.h_next, &format!("rep.{group}.v1"))[0];
        let s2 = self.bilinear_scores(store, h_mk, &ctx.h_next, &format!("rep.{group}.v2"))[0];
        stable_softmax(&[s1, s2])[0]
    }

    // ---- graph (training) path ------------------------------------------

    /// Stacked bilinear pointer scores for the context entries.
    pub fn pointer_scores_graph(
        &self,
        g: &mut Graph,
        ctx_states: &[Vid],
        h_next: Vid,
        group: &str,
    ) -> Vid {
        let wh = g.matvec_param(&format!("rep.{group}.w"), h_next);
        let scores: Vec<Vid> = ctx_states.iter().map(|&h| g.dot(h, wh)).collect();
        g.stack(scores)
    }

    /// Stacked [s1, s2] decision logits for `h_mk`.
    pub fn decision_logits_graph(
        &self,
        g: &mut Graph,
        h_mk: Vid,
        h_next: Vid,
        group: &str,
    ) -> Vid {
        let v1h = g.matvec_param(&format!("rep.{group}.v1"), h_next);
        let v2h = g.matvec_param(&format!("rep.{group}.v2"), h_next);
        let s1 = g.dot(h_mk, v1h);
        let s2 = g.dot(h_mk, v2h);
        g.stack(vec![s1, s2])
    }
}

/// Index of the maximum probability; ties break toward the lowest index.
pub fn rep_argmax(pointer_probs: &[f64]) -> usize {
    assert!(!pointer_probs.is_empty(), "argmax of empty distribution");
    let mut best = 0;
    for (i, &p) in pointer_probs.iter().enumerate().skip(1) {
        if p > pointer_probs[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TokenRef;

    fn ctx_of(states: Vec<Vec<f64>>, h_next: Vec<f64>) -> ContextStates {
        let token_refs = states
            .iter()
            .enumerate()
            .map(|(i, _)| TokenRef {
                text: format!("t{i}"),
                position: i,
                is_variable: true,
                parent_kind: "Assignment".to_string(),
            })
            .collect();
        ContextStates { states, h_next, token_refs }
    }

    fn single_head(hidden: usize) -> (RepHeadSet, ParamStore) {
        let heads = RepHeadSet::new(HeadMode::Single, hidden).unwrap();
        let mut store = ParamStore::new();
        heads.register(&mut store);
        (heads, store)
    }

    #[test]
    fn zero_bilinear_form_gives_uniform_pointer() {
        let (heads, store) = single_head(3);
        let ctx = ctx_of(
            vec![vec![1.0, 0.0, 2.0], vec![0.5, -1.0, 0.0], vec![0.1, 0.2, 0.3]],
            vec![1.0, 1.0, 1.0],
        );
        let probs = heads.pointer_probs(&store, &ctx, "all");
        for p in &probs {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn singleton_context_gets_probability_one() {
        let (heads, store) = single_head(2);
        let ctx = ctx_of(vec![vec![0.3, -0.7]], vec![0.9, 0.1]);
        let probs = heads.pointer_probs(&store, &ctx, "all");
        assert_eq!(probs, vec![1.0]);
    }

    #[test]
    fn pointer_matches_naive_exponential_oracle() {
        let (heads, mut store) = single_head(3);
        let w = store.get_mut("rep.all.w");
        for (i, v) in w.values.iter_mut().enumerate() {
            *v = ((i as f64) * 0.31).sin() * 0.4;
        }
        let ctx = ctx_of(
            vec![vec![0.2, -0.4, 0.6], vec![-0.1, 0.5, 0.3], vec![0.7, 0.0, -0.2]],
            vec![0.25, -0.5, 0.75],
        );
        let probs = heads.pointer_probs(&store, &ctx, "all");

        // naive oracle: e^{h_k^T W h_next} / Σ, computed directly
        let w = store.get("rep.all.w");
        let score = |h: &[f64]| -> f64 {
            let mut s = 0.0;
            for r in 0..3 {
                for c in 0..3 {
                    s += h[r] * w.values[r * 3 + c] * ctx.h_next[c];
                }
            }
            s
        };
        let exps: Vec<f64> = ctx.states.iter().map(|h| score(h).exp()).collect();
        let z: f64 = exps.iter().sum();
        for (p, e) in probs.iter().zip(&exps) {
            assert!((p - e / z).abs() < 1e-10);
        }
    }

    #[test]
    fn argmax_unique_tie_and_scan_oracle() {
        assert_eq!(rep_argmax(&[0.2, 0.5, 0.3]), 1);
        assert_eq!(rep_argmax(&[0.5, 0.5]), 0);
        let v = [0.11, 0.07, 0.31, 0.31, 0.2];
        let scan = v
            .iter()
            .enumerate()
            .fold((0usize, f64::MIN), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc })
            .0;
        assert_eq!(rep_argmax(&v), scan);
    }

    #[test]
    fn identical_decision_forms_give_exactly_half() {
        let (heads, mut store) = single_head(2);
        for name in ["rep.all.v1", "rep.all.v2"] {
            let t = store.get_mut(name);
            t.values.copy_from_slice(&[0.3, -0.2, 0.1, 0.5]);
        }
        let ctx = ctx_of(vec![vec![0.4, 0.8]], vec![-0.3, 0.6]);
        assert_eq!(heads.decision(&store, &ctx, 0, "all"), 0.5);
    }

    #[test]
    fn dominant_v1_drives_decision_to_one() {
        let (heads, mut store) = single_head(2);
        store.get_mut("rep.all.v1").values.copy_from_slice(&[50.0, 0.0, 0.0, 50.0]);
        let ctx = ctx_of(vec![vec![1.0, 1.0]], vec![1.0, 1.0]);
        let p = heads.decision(&store, &ctx, 0, "all");
        assert!(p > 1.0 - 1e-12);
    }

    #[test]
    fn decision_matches_two_exponential_oracle() {
        let (heads, mut store) = single_head(2);
        store.get_mut("rep.all.v1").values.copy_from_slice(&[0.2, -0.1, 0.4, 0.3]);
        store.get_mut("rep.all.v2").values.copy_from_slice(&[-0.3, 0.5, 0.1, -0.2]);
        let ctx = ctx_of(vec![vec![0.6, -0.4]], vec![0.2, 0.9]);
        let p = heads.decision(&store, &ctx, 0, "all");

        let bilinear = |name: &str| -> f64 {
            let w = store.get(name);
            let mut s = 0.0;
            for r in 0..2 {
                for c in 0..2 {
                    s += ctx.states[0][r] * w.values[r * 2 + c] * ctx.h_next[c];
                }
            }
            s
        };
        let (s1, s2) = (bilinear("rep.all.v1"), bilinear("rep.all.v2"));
        let want = s1.exp() / (s1.exp() + s2.exp());
        assert!((p - want).abs() < 1e-12);
    }

    #[test]
    fn routing_single_per_kind_and_unknown_kind() {
        let single = RepHeadSet::new(HeadMode::Single, 4).unwrap();
        assert_eq!(single.group_for("MethodInvocation"), "all");

        let per_kind = RepHeadSet::new(
            HeadMode::PerKind { kinds: vec!["TypeParameter".into(), "MethodInvocation".into()] },
            4,
        )
        .unwrap();
        assert_eq!(per_kind.group_for("TypeParameter"), "TypeParameter");
        assert_eq!(per_kind.group_for("Assignment"), "default");
        assert_eq!(per_kind.groups().len(), 3);

        let err = RepHeadSet::new(HeadMode::PerKind { kinds: vec!["NoSuchKind".into()] }, 4);
        assert!(err.is_err());
    }

    #[test]
    fn graph_pointer_scores_match_value_path() {
        let (heads, mut store) = single_head(3);
        let w = store.get_mut("rep.all.w");
        for (i, v) in w.values.iter_mut().enumerate() {
            *v = (i as f64 - 4.0) * 0.07;
        }
        let ctx = ctx_of(
            vec![vec![0.3, 0.1, -0.2], vec![-0.6, 0.4, 0.9]],
            vec![0.5, -0.5, 0.25],
        );
        let value_probs = heads.pointer_probs(&store, &ctx, "all");

        let mut g = Graph::new(&store);
        let ctx_vids: Vec<_> = ctx.states.iter().map(|h| g.value(h.clone())).collect();
        let h_next = g.value(ctx.h_next.clone());
        let scores = heads.pointer_scores_graph(&mut g, &ctx_vids, h_next, "all");
        let graph_probs = stable_softmax(g.val(scores));
        for (a, b) in value_probs.iter().zip(&graph_probs) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
