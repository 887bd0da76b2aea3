//! Models: the LSTM language model, the bilinear repetition pointer head
//! over cared-only context states, the per-kind / variables-only head
//! variants, the additive attention-pointer comparator, and the candidate
//! mixture that turns pointer mass plus LM mass into one ranked list.

mod atten;
mod lstm;
mod rep;

pub use atten::AttenPtrModel;
pub use lstm::{LstmDims, LstmLm, LstmState};
pub use rep::{rep_argmax, RepHeadSet};

use crate::corpus::Vocabulary;
use crate::syntax::{NodeClass, TokenEvent};

/// Hidden states of the cared context tokens plus the state at the
/// prediction point, with the raw token reference for each entry.
#[derive(Debug, Clone)]
pub struct ContextStates {
    /// h for each cared context token, oldest first.
    pub states: Vec<Vec<f64>>,
    /// h at the prediction point.
    pub h_next: Vec<f64>,
    pub token_refs: Vec<TokenRef>,
}

#[derive(Debug, Clone)]
pub struct TokenRef {
    pub text: String,
    pub position: usize,
    pub is_variable: bool,
    pub parent_kind: String,
}

impl ContextStates {
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }
}

/// Assemble the REP context for predicting the event at `pos`.
///
/// `run` must hold n+1 states: `run[0]` initial, `run[t+1]` after consuming
/// event t. Cared events among the previous `m` raw positions contribute
/// their post-consumption state; `variables_only` drops non-variable
/// entries before pointer scoring.
pub fn context_states(
    events: &[TokenEvent],
    run: &[LstmState],
    pos: usize,
    m: usize,
    variables_only: bool,
) -> ContextStates {
    assert!(run.len() == events.len() + 1, "need n+1 run states");
    // pos == events.len() asks for the context at the end of the sequence
    assert!(pos <= events.len());
    let lo = pos.saturating_sub(m);
    let mut states = Vec::new();
    let mut token_refs = Vec::new();
    for k in lo..pos {
        let event = &events[k];
        if event.class != NodeClass::Cared {
            continue;
        }
        if variables_only && !event.var {
            continue;
        }
        states.push(run[k + 1].h.clone());
        token_refs.push(TokenRef {
            text: event.text.clone(),
            position: k,
            is_variable: event.var,
            parent_kind: event.parent.clone(),
        });
    }
    ContextStates { states, h_next: run[pos].h.clone(), token_refs }
}

/// Candidate ordering: higher probability first; ties break on the token
/// string so rankings are deterministic.
pub fn candidate_order(a: &(String, f64), b: &(String, f64)) -> std::cmp::Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

/// Merge pointer mass and LM mass into one candidate list, unordered.
///
/// Every context entry contributes `(raw text, p_rep * pointer[k])`; every
/// vocabulary token contributes `(token, (1 - p_rep) * lm_dist[id])`.
/// Identical strings merge by summing. With an empty context the LM
/// distribution is returned alone.
fn merged_candidates(
    lm_dist: &[f64],
    vocab: &Vocabulary,
    pointer: &[f64],
    p_rep: f64,
    ctx_tokens: &[&str],
) -> Vec<(String, f64)> {
    if ctx_tokens.is_empty() {
        return lm_dist
            .iter()
            .enumerate()
            .map(|(id, &p)| (vocab.decode(id).to_string(), p))
            .collect();
    }
    assert_eq!(pointer.len(), ctx_tokens.len());
    let mut out: Vec<(String, f64)> = lm_dist
        .iter()
        .enumerate()
        .map(|(id, &p)| (vocab.decode(id).to_string(), (1.0 - p_rep) * p))
        .collect();
    // pointer contributions merge into vocabulary slots where the string is
    // in-vocabulary, and append otherwise (merged among themselves too)
    let mut extra: Vec<(String, f64)> = Vec::new();
    for (k, &text) in ctx_tokens.iter().enumerate() {
        let mass = p_rep * pointer[k];
        let id = vocab.encode(text);
        if id != Vocabulary::UNK_ID {
            out[id].1 += mass;
        } else {
            match extra.iter_mut().find(|(t, _)| t == text) {
                Some(slot) => slot.1 += mass,
                None => extra.push((text.to_string(), mass)),
            }
        }
    }
    out.extend(extra);
    out
}

/// Full ranked mixture: descending probability, total mass 1 (within
/// accumulation error).
pub fn mix_distributions(
    lm_dist: &[f64],
    vocab: &Vocabulary,
    pointer: &[f64],
    p_rep: f64,
    ctx_tokens: &[&str],
) -> Vec<(String, f64)> {
    let mut cands = merged_candidates(lm_dist, vocab, pointer, p_rep, ctx_tokens);
    cands.sort_by(candidate_order);
    cands
}

/// Top-k of the mixture without sorting the full vocabulary.
pub fn mix_topk(
    lm_dist: &[f64],
    vocab: &Vocabulary,
    pointer: &[f64],
    p_rep: f64,
    ctx_tokens: &[&str],
    k: usize,
) -> Vec<(String, f64)> {
    let cands = merged_candidates(lm_dist, vocab, pointer, p_rep, ctx_tokens);
    partial_topk(cands, k)
}

/// Top-k of a plain LM distribution.
pub fn lm_topk(lm_dist: &[f64], vocab: &Vocabulary, k: usize) -> Vec<(String, f64)> {
    let cands: Vec<(String, f64)> = lm_dist
        .iter()
        .enumerate()
        .map(|(id, &p)| (vocab.decode(id).to_string(), p))
        .collect();
    partial_topk(cands, k)
}

fn partial_topk(cands: Vec<(String, f64)>, k: usize) -> Vec<(String, f64)> {
    let mut best: Vec<(String, f64)> = Vec::with_capacity(k + 1);
    for cand in cands {
        if best.len() == k {
            if candidate_order(best.last().expect("nonempty"), &cand) != std::cmp::Ordering::Greater
            {
                continue;
            }
            best.pop();
        }
        let at = best
            .binary_search_by(|probe| candidate_order(probe, &cand))
            .unwrap_or_else(|i| i);
        best.insert(at, cand);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::FunctionEvents;

    pub(crate) fn tiny_vocab(tokens: &[&str]) -> Vocabulary {
        // every listed token appears twice so only the synthetic padder
        // becomes UNK
        let mut texts: Vec<&str> = Vec::new();
        for t in tokens {
            texts.push(t);
            texts.push(t);
        }
        texts.push("rare-padder");
        let events: Vec<TokenEvent> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TokenEvent {
                function: "f".into(),
                pos: i,
                text: (*t).into(),
                content: false,
                class: NodeClass::NotSimpleName,
                var: false,
                parent: String::new(),
            })
            .collect();
        Vocabulary::build(&[FunctionEvents { id: "f".into(), events }], 1).unwrap()
    }

    #[test]
    fn gate_closed_reproduces_lm_distribution() {
        let vocab = tiny_vocab(&["a", "b", "c"]);
        let lm = vec![0.1, 0.5, 0.3, 0.1];
        let mix = mix_distributions(&lm, &vocab, &[1.0], 0.0, &["x"]);
        let mass: f64 = mix.iter().map(|(_, p)| p).sum();
        assert!((mass - 1.0).abs() < 1e-9);
        for (text, p) in &mix {
            if text == "x" {
                assert_eq!(*p, 0.0);
            } else {
                let id = vocab.encode(text);
                assert!((p - lm[id]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gate_open_singleton_context_takes_all_mass() {
        let vocab = tiny_vocab(&["a", "b"]);
        let lm = vec![0.25, 0.5, 0.25];
        let mix = mix_distributions(&lm, &vocab, &[1.0], 1.0, &["x"]);
        assert_eq!(mix[0].0, "x");
        assert!((mix[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_context_strings_merge() {
        let vocab = tiny_vocab(&["a"]);
        let lm = vec![0.5, 0.5];
        let mix = mix_distributions(&lm, &vocab, &[0.6, 0.4], 1.0, &["x", "x"]);
        assert_eq!(mix[0].0, "x");
        assert!((mix[0].1 - 1.0).abs() < 1e-12);
        let total: f64 = mix.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_context_returns_lm_alone() {
        let vocab = tiny_vocab(&["a", "b"]);
        let lm = vec![0.2, 0.7, 0.1];
        let mix = mix_distributions(&lm, &vocab, &[], 0.9, &[]);
        assert_eq!(mix.len(), 3);
        assert_eq!(mix[0].0, "a");
        assert!((mix[0].1 - 0.7).abs() < 1e-12);
    }

    #[test]
    fn in_vocab_context_tokens_merge_with_lm_slots() {
        let vocab = tiny_vocab(&["a", "b"]);
        let a_id = vocab.encode("a");
        let mut lm = vec![0.0; vocab.len()];
        lm[a_id] = 0.6;
        lm[vocab.encode("b")] = 0.4;
        let mix = mix_distributions(&lm, &vocab, &[1.0], 0.5, &["a"]);
        // "a" holds 0.5*0.6 (LM side) + 0.5*1.0 (pointer side)
        assert_eq!(mix[0].0, "a");
        assert!((mix[0].1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn topk_matches_full_sort() {
        let vocab = tiny_vocab(&["a", "b", "c", "d"]);
        let lm = vec![0.05, 0.3, 0.25, 0.2, 0.2];
        let full = mix_distributions(&lm, &vocab, &[0.7, 0.3], 0.4, &["zz", "c"]);
        let top = mix_topk(&lm, &vocab, &[0.7, 0.3], 0.4, &["zz", "c"], 3);
        assert_eq!(&full[..3], &top[..]);
    }

    #[test]
    fn candidate_order_breaks_probability_ties_by_string() {
        let mut v = vec![
            ("zeta".to_string(), 0.5),
            ("alpha".to_string(), 0.5),
            ("mid".to_string(), 0.6),
        ];
        v.sort_by(candidate_order);
        assert_eq!(v[0].0, "mid");
        assert_eq!(v[1].0, "alpha");
        assert_eq!(v[2].0, "zeta");
    }
}
