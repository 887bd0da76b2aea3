//! Stratified top-k evaluation with teacher forcing.
//!
//! Scoring is content-only: node-type tokens are consumed as given and never
//! scored. A top-k hit requires the true raw content string among the first
//! k candidates; predicting UNK never counts as a hit. Strata: all content
//! tokens, cared content tokens, and cared tokens whose raw text never
//! occurs in the training split.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{SplitCorpus, Vocabulary};
use crate::model::{
    context_states, lm_topk, mix_topk, rep_argmax, AttenPtrModel, LstmLm, LstmState, RepHeadSet,
};
use crate::numeric::ParamStore;
use crate::syntax::{FunctionEvents, NodeClass, TokenEvent};

pub const TOP_KS: [usize; 4] = [1, 3, 6, 10];
pub const STRATA: [&str; 3] = ["all", "cared", "unseen-cared"];

/// Everything a model needs to rank candidates for one content token.
pub struct SuggestInput<'a> {
    pub events: &'a [TokenEvent],
    /// n+1 teacher-forced states; `run[pos]` is the state at the prediction
    /// point for the event at `pos`.
    pub run: &'a [LstmState],
    pub pos: usize,
    pub lm_dist: &'a [f64],
    pub vocab: &'a Vocabulary,
    pub k: usize,
}

pub trait Suggester {
    fn suggest(&self, input: &SuggestInput) -> Vec<(String, f64)>;
    fn label(&self) -> &str;
}

/// Plain language model: the LM distribution alone, at every content token.
pub struct LstmSuggester;

impl Suggester for LstmSuggester {
    fn suggest(&self, input: &SuggestInput) -> Vec<(String, f64)> {
        lm_topk(input.lm_dist, input.vocab, input.k)
    }

    fn label(&self) -> &str {
        "LSTM"
    }
}

/// Repetition head over the frozen LM: at cared tokens with a nonempty
/// context the pointer and LM mix; everywhere else the LM answers alone.
pub struct RepSuggester<'a> {
    pub heads: &'a RepHeadSet,
    pub head_store: &'a ParamStore,
    pub m: usize,
}

impl Suggester for RepSuggester<'_> {
    fn suggest(&self, input: &SuggestInput) -> Vec<(String, f64)> {
        let event = &input.events[input.pos];
        if event.class != NodeClass::Cared {
            return lm_topk(input.lm_dist, input.vocab, input.k);
        }
        let ctx = context_states(
            input.events,
            input.run,
            input.pos,
            self.m,
            self.heads.variables_only(),
        );
        if ctx.is_empty() {
            return lm_topk(input.lm_dist, input.vocab, input.k);
        }
        let group = self.heads.group_for(&event.parent);
        let pointer = self.heads.pointer_probs(self.head_store, &ctx, group);
        let mk = rep_argmax(&pointer);
        let p_rep = self.heads.decision(self.head_store, &ctx, mk, group);
        let ctx_tokens: Vec<&str> = ctx.token_refs.iter().map(|t| t.text.as_str()).collect();
        mix_topk(input.lm_dist, input.vocab, &pointer, p_rep, &ctx_tokens, input.k)
    }

    fn label(&self) -> &str {
        "REP"
    }
}

/// Attention-pointer baseline with the same eligibility rule as REP.
pub struct AttenPtrSuggester<'a> {
    pub model: &'a AttenPtrModel,
    pub head_store: &'a ParamStore,
    pub m: usize,
}

impl Suggester for AttenPtrSuggester<'_> {
    fn suggest(&self, input: &SuggestInput) -> Vec<(String, f64)> {
        let event = &input.events[input.pos];
        if event.class != NodeClass::Cared {
            return lm_topk(input.lm_dist, input.vocab, input.k);
        }
        let ctx = context_states(input.events, input.run, input.pos, self.m, false);
        if ctx.is_empty() {
            return lm_topk(input.lm_dist, input.vocab, input.k);
        }
        let pointer = self.model.pointer_probs(self.head_store, &ctx);
        let gate = self.model.gate(self.head_store, &ctx.h_next);
        let ctx_tokens: Vec<&str> = ctx.token_refs.iter().map(|t| t.text.as_str()).collect();
        mix_topk(input.lm_dist, input.vocab, &pointer, gate, &ctx_tokens, input.k)
    }

    fn label(&self) -> &str {
        "Atten-Ptr"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KScore {
    pub k: usize,
    pub hits: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumScores {
    pub stratum: String,
    pub total: usize,
    pub per_k: Vec<KScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitScores {
    pub split: String,
    pub strata: Vec<StratumScores>,
}

impl SplitScores {
    pub fn stratum(&self, name: &str) -> &StratumScores {
        self.strata.iter().find(|s| s.stratum == name).expect("known stratum")
    }

    pub fn accuracy(&self, stratum: &str, k: usize) -> f64 {
        self.stratum(stratum)
            .per_k
            .iter()
            .find(|s| s.k == k)
            .map(|s| s.accuracy)
            .expect("known k")
    }
}

/// Full evaluation report over both held-out splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model: String,
    /// Scoring rule recorded in the report header.
    pub scoring: String,
    pub validation: SplitScores,
    pub test: SplitScores,
}

pub const SCORING_NOTE: &str =
    "content tokens only; node-type tokens consumed, never scored; UNK predictions never count";

struct StratumAcc {
    hits: [usize; TOP_KS.len()],
    total: usize,
}

impl StratumAcc {
    fn new() -> Self {
        StratumAcc { hits: [0; TOP_KS.len()], total: 0 }
    }

    fn record(&mut self, rank: Option<usize>) {
        self.total += 1;
        if let Some(rank) = rank {
            for (i, &k) in TOP_KS.iter().enumerate() {
                if rank < k {
                    self.hits[i] += 1;
                }
            }
        }
    }

    fn scores(&self, name: &str) -> StratumScores {
        StratumScores {
            stratum: name.to_string(),
            total: self.total,
            per_k: TOP_KS
                .iter()
                .enumerate()
                .map(|(i, &k)| KScore {
                    k,
                    hits: self.hits[i],
                    accuracy: if self.total == 0 {
                        0.0
                    } else {
                        self.hits[i] as f64 / self.total as f64
                    },
                })
                .collect(),
        }
    }
}

/// Raw content-token texts of the training split, for the unseen stratum.
pub fn train_content_texts(corpus: &SplitCorpus) -> HashSet<String> {
    let mut texts = HashSet::new();
    for function in &corpus.train {
        for event in &function.events {
            if event.content {
                texts.insert(event.text.clone());
            }
        }
    }
    texts
}

/// Evaluate one split with teacher-forced history.
pub fn evaluate_split(
    lm: &LstmLm,
    lm_store: &ParamStore,
    vocab: &Vocabulary,
    suggester: &dyn Suggester,
    functions: &[FunctionEvents],
    train_texts: &HashSet<String>,
    split_name: &str,
) -> SplitScores {
    let mut all = StratumAcc::new();
    let mut cared = StratumAcc::new();
    let mut unseen = StratumAcc::new();
    let k_max = *TOP_KS.last().expect("ks nonempty");

    for function in functions {
        let events = &function.events;
        let ids = vocab.encode_sequence(events);
        let run = lm.run(lm_store, &ids);
        for pos in 0..events.len() {
            let event = &events[pos];
            if !event.content {
                continue;
            }
            let lm_dist = lm.next_distribution(lm_store, &run[pos]);
            let input = SuggestInput { events, run: &run, pos, lm_dist: &lm_dist, vocab, k: k_max };
            let candidates = suggester.suggest(&input);
            let rank = candidates.iter().position(|(text, _)| *text == event.text);

            all.record(rank);
            if event.class == NodeClass::Cared {
                cared.record(rank);
                if !train_texts.contains(&event.text) {
                    unseen.record(rank);
                }
            }
        }
    }

    SplitScores {
        split: split_name.to_string(),
        strata: vec![all.scores("all"), cared.scores("cared"), unseen.scores("unseen-cared")],
    }
}

/// Evaluate validation and test splits into one report.
pub fn evaluate(
    lm: &LstmLm,
    lm_store: &ParamStore,
    vocab: &Vocabulary,
    suggester: &dyn Suggester,
    corpus: &SplitCorpus,
) -> EvalReport {
    let train_texts = train_content_texts(corpus);
    EvalReport {
        model: suggester.label().to_string(),
        scoring: SCORING_NOTE.to_string(),
        validation: evaluate_split(
            lm,
            lm_store,
            vocab,
            suggester,
            &corpus.validation,
            &train_texts,
            "validation",
        ),
        test: evaluate_split(lm, lm_store, vocab, suggester, &corpus.test, &train_texts, "test"),
    }
}

/// Top-1 accuracy of one stratum on one function list; the early-stopping
/// metric.
pub fn top1_accuracy(
    lm: &LstmLm,
    lm_store: &ParamStore,
    vocab: &Vocabulary,
    suggester: &dyn Suggester,
    functions: &[FunctionEvents],
    stratum: &str,
    train_texts: &HashSet<String>,
) -> f64 {
    let scores =
        evaluate_split(lm, lm_store, vocab, suggester, functions, train_texts, "metric");
    scores.accuracy(stratum, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LstmDims;

    fn event(pos: usize, text: &str, content: bool, class: NodeClass) -> TokenEvent {
        TokenEvent {
            function: "f".into(),
            pos,
            text: text.into(),
            content,
            class,
            var: class == NodeClass::Cared,
            parent: "Assignment".into(),
        }
    }

    fn repeat_function() -> FunctionEvents {
        // x introduced then repeated: [Block, SimpleName, x, SimpleName, x, SimpleName, x]
        let mut events = vec![event(0, "Block", false, NodeClass::NotSimpleName)];
        for _ in 0..3 {
            events.push(event(events.len(), "SimpleName", false, NodeClass::NotSimpleName));
            events.push(event(events.len(), "x", true, NodeClass::Cared));
        }
        FunctionEvents { id: "f".into(), events }
    }

    struct OraclePointer {
        m: usize,
    }

    impl Suggester for OraclePointer {
        fn suggest(&self, input: &SuggestInput) -> Vec<(String, f64)> {
            let event = &input.events[input.pos];
            let lo = input.pos.saturating_sub(self.m);
            let repeated = input.events[lo..input.pos]
                .iter()
                .any(|e| e.class == NodeClass::Cared && e.text == event.text);
            if event.class == NodeClass::Cared && repeated {
                vec![(event.text.clone(), 1.0)]
            } else {
                lm_topk(input.lm_dist, input.vocab, input.k)
            }
        }

        fn label(&self) -> &str {
            "oracle"
        }
    }

    fn setup() -> (LstmLm, ParamStore, Vocabulary, Vec<FunctionEvents>) {
        let functions = vec![repeat_function()];
        let vocab = Vocabulary::build(&functions, 1).unwrap();
        let lm = LstmLm::new(LstmDims { vocab: vocab.len(), embed: 3, hidden: 4 });
        let mut store = ParamStore::new();
        lm.register(&mut store);
        store.init(2);
        (lm, store, vocab, functions)
    }

    #[test]
    fn perfect_pointer_scores_one_on_repeating_cared_tokens() {
        let (lm, store, vocab, functions) = setup();
        let train_texts = HashSet::new();
        let oracle = OraclePointer { m: 25 };
        let scores =
            evaluate_split(&lm, &store, &vocab, &oracle, &functions, &train_texts, "test");
        // first x is unrepeatable; the two following repeats must hit
        let cared = scores.stratum("cared");
        assert_eq!(cared.total, 3);
        assert_eq!(cared.per_k[0].hits, 2);
    }

    #[test]
    fn strata_nest_and_ks_are_monotone() {
        let (lm, store, vocab, functions) = setup();
        let train_texts = HashSet::new(); // everything unseen
        let oracle = OraclePointer { m: 25 };
        let scores =
            evaluate_split(&lm, &store, &vocab, &oracle, &functions, &train_texts, "test");
        let (all, cared, unseen) =
            (scores.stratum("all"), scores.stratum("cared"), scores.stratum("unseen-cared"));
        assert!(unseen.total <= cared.total && cared.total <= all.total);
        for s in [all, cared, unseen] {
            for w in s.per_k.windows(2) {
                assert!(w[0].hits <= w[1].hits);
                assert!(w[0].accuracy <= w[1].accuracy + 1e-15);
            }
        }
        for i in 0..TOP_KS.len() {
            assert!(unseen.per_k[i].hits <= cared.per_k[i].hits);
            assert!(cared.per_k[i].hits <= all.per_k[i].hits);
        }
    }

    #[test]
    fn teacher_forcing_states_ignore_predictions() {
        // the state stream must be a pure function of the ground-truth ids
        let (lm, store, vocab, functions) = setup();
        let ids = vocab.encode_sequence(&functions[0].events);
        let run_a = lm.run(&store, &ids);
        // "predict" garbage at every step and recompute: states identical
        let mut state = lm.initial_state();
        let mut run_b = vec![state.clone()];
        for &id in &ids {
            let _pretend_prediction = lm.next_distribution(&store, &state);
            state = lm.step(&store, &state, id);
            run_b.push(state.clone());
        }
        for (a, b) in run_a.iter().zip(&run_b) {
            assert_eq!(a.h, b.h);
        }
    }

    #[test]
    fn untrained_lstm_scores_zero_on_unseen() {
        let (lm, store, vocab, functions) = setup();
        // mark every text as absent from training: all cared are unseen
        let train_texts = HashSet::new();
        let scores = evaluate_split(
            &lm,
            &store,
            &vocab,
            &LstmSuggester,
            &functions,
            &train_texts,
            "test",
        );
        // vocabulary contains x here, so this is not the structural-zero
        // case; it only checks the evaluation plumbing runs
        assert_eq!(scores.stratum("all").total, 3);
    }

    #[test]
    fn brute_force_report_oracle() {
        // independent re-scoring of the same candidates
        let (lm, store, vocab, functions) = setup();
        let train_texts = HashSet::new();
        let oracle = OraclePointer { m: 25 };
        let scores =
            evaluate_split(&lm, &store, &vocab, &oracle, &functions, &train_texts, "test");

        let events = &functions[0].events;
        let ids = vocab.encode_sequence(events);
        let run = lm.run(&store, &ids);
        let mut expected_hits = vec![0usize; TOP_KS.len()];
        let mut total = 0;
        for pos in 0..events.len() {
            if !events[pos].content {
                continue;
            }
            total += 1;
            let lm_dist = lm.next_distribution(&store, &run[pos]);
            let input =
                SuggestInput { events, run: &run, pos, lm_dist: &lm_dist, vocab: &vocab, k: 10 };
            let cands = oracle.suggest(&input);
            for (i, &k) in TOP_KS.iter().enumerate() {
                if cands.iter().take(k).any(|(t, _)| *t == events[pos].text) {
                    expected_hits[i] += 1;
                }
            }
        }
        let all = scores.stratum("all");
        assert_eq!(all.total, total);
        for (i, _) in TOP_KS.iter().enumerate() {
            assert_eq!(all.per_k[i].hits, expected_hits[i]);
        }
    }
}
