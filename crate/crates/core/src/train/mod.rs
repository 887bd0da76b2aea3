//! Two-stage training: the LSTM language model first, then the repetition
//! heads (and the attention-pointer baseline) over the frozen LM's hidden
//! states. Early stopping fires once the validation top-1 metric has not
//! exceeded its running maximum for `patience` consecutive epochs; the
//! best-validation parameters are returned.

mod checkpoint;
pub mod eval;
pub mod report;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CheckpointKind, SavedParam};
pub use eval::{
    evaluate, evaluate_split, top1_accuracy, train_content_texts, AttenPtrSuggester, EvalReport,
    KScore, LstmSuggester, RepSuggester, SplitScores, StratumScores, Suggester, SuggestInput,
    SCORING_NOTE, STRATA, TOP_KS,
};
pub use report::{compare_models, render_comparison, render_report, CompareError, Comparison};


use serde::{Deserialize, Serialize};

use crate::artifact::ArtifactError;
use crate::config::TrainConfig;
use crate::corpus::{CorpusError, SplitCorpus, Vocabulary};
use crate::model::{
    context_states, rep_argmax, AttenPtrModel, LstmDims, LstmLm, LstmState, RepHeadSet,
};
use crate::numeric::graph::{Graph, Vid};
use crate::numeric::{clip_gradients, seeded_rng, ParamStore};
use crate::syntax::{FunctionEvents, NodeClass};

use rand::seq::SliceRandom;

#[derive(Debug, thiserror::Error)]
pub enum TrainError {
    #[error("training diverged: non-finite loss in epoch {epoch} (function `{function}`)")]
    Divergence { epoch: usize, function: String },
    #[error("corpus has no cared prediction points with nonempty context")]
    NoCaredPoints,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Artifact(#[from] ArtifactError),
}

/// One line of the training log, serialized as JSONL.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_metric: f64,
    pub best_so_far: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrainOutcome {
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub stopped_early: bool,
    pub log: Vec<EpochLog>,
}

/// Early stopping as a pure function of the validation-metric sequence:
/// stop once the metric has not exceeded the running maximum for
/// `patience` consecutive epochs.
#[derive(Debug, Clone)]
pub struct EarlyStopper {
    patience: usize,
    best: f64,
    best_epoch: usize,
    stale: usize,
}

impl EarlyStopper {
    pub fn new(patience: usize) -> Self {
        assert!(patience >= 1);
        EarlyStopper { patience, best: f64::NEG_INFINITY, best_epoch: 0, stale: 0 }
    }

    /// Record the metric for `epoch` (1-based). Returns true when training
    /// should stop after this epoch. An improvement is a strict increase.
    pub fn record(&mut self, epoch: usize, metric: f64) -> bool {
        if metric > self.best {
            self.best = metric;
            self.best_epoch = epoch;
            self.stale = 0;
            false
        } else {
            self.stale += 1;
            self.stale >= self.patience
        }
    }

    pub fn improved(&self, epoch: usize) -> bool {
        self.best_epoch == epoch
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn best(&self) -> f64 {
        self.best
    }
}

fn epoch_order(count: usize, seed: u64, epoch: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..count).collect();
    let mut rng = seeded_rng(seed ^ (epoch as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    order.shuffle(&mut rng);
    order
}

/// Train the language model with per-function SGD steps and gradient
/// clipping. Returns the best-validation parameters.
pub fn train_lm(
    corpus: &SplitCorpus,
    vocab: &Vocabulary,
    config: &TrainConfig,
) -> Result<(LstmLm, ParamStore, TrainOutcome), TrainError> {
    let dims = LstmDims {
        vocab: vocab.len(),
        embed: config.embed_size,
        hidden: config.hidden_size,
    };
    let lm = LstmLm::new(dims);
    let mut store = ParamStore::new();
    lm.register(&mut store);
    store.init(config.seed);

    let train_ids: Vec<Vec<usize>> =
        corpus.train.iter().map(|f| vocab.encode_sequence(&f.events)).collect();
    let train_texts = train_content_texts(corpus);

    let mut stopper = EarlyStopper::new(config.patience);
    let mut best_snapshot = store.snapshot();
    let mut log = Vec::new();
    let mut epochs_run = 0;
    let mut stopped_early = false;

    for epoch in 1..=config.max_epochs {
        epochs_run = epoch;
        let mut epoch_loss = 0.0;
        let mut counted = 0usize;
        for &idx in &epoch_order(train_ids.len(), config.seed, epoch) {
            let tokens = &train_ids[idx];
            if tokens.len() < 2 {
                continue;
            }
            store.zero_grads();
            let (loss, grads) = {
                let mut g = Graph::new(&store);
                let loss = lm.lm_loss_graph(&mut g, tokens).expect("len >= 2");
                (g.scalar(loss), g.backward(loss))
            };
            if !loss.is_finite() {
                return Err(TrainError::Divergence {
                    epoch,
                    function: corpus.train[idx].id.clone(),
                });
            }
            epoch_loss += loss;
            counted += 1;
            store.accumulate_grads(grads);
            clip_gradients(&mut store, config.clip_lo, config.clip_hi);
            store.sgd_step(config.learning_rate);
        }
        let train_loss = if counted == 0 { 0.0 } else { epoch_loss / counted as f64 };

        let val_metric = top1_accuracy(
            &lm,
            &store,
            vocab,
            &LstmSuggester,
            &corpus.validation,
            "all",
            &train_texts,
        );
        let stop = stopper.record(epoch, val_metric);
        if stopper.improved(epoch) {
            best_snapshot = store.snapshot();
        }
        log.push(EpochLog { epoch, train_loss, val_metric, best_so_far: stopper.best() });
        if stop {
            stopped_early = true;
            break;
        }
    }

    store.restore(&best_snapshot);
    let outcome = TrainOutcome {
        best_epoch: stopper.best_epoch(),
        epochs_run,
        stopped_early,
        log,
    };
    Ok((lm, store, outcome))
}

/// One cared prediction point with a nonempty context.
struct RepPoint {
    function: usize,
    pos: usize,
}

fn collect_points(functions: &[FunctionEvents], m: usize) -> Vec<RepPoint> {
    let mut points = Vec::new();
    for (fi, function) in functions.iter().enumerate() {
        for (pos, event) in function.events.iter().enumerate() {
            if event.class != NodeClass::Cared || !event.content {
                continue;
            }
            let lo = pos.saturating_sub(m);
            let has_ctx =
                function.events[lo..pos].iter().any(|e| e.class == NodeClass::Cared);
            if has_ctx {
                points.push(RepPoint { function: fi, pos });
            }
        }
    }
    points
}

/// Hidden states of every train function under the frozen LM, computed
/// once.
fn frozen_runs(
    lm: &LstmLm,
    lm_store: &ParamStore,
    vocab: &Vocabulary,
    functions: &[FunctionEvents],
) -> Vec<Vec<LstmState>> {
    functions
        .iter()
        .map(|f| lm.run(lm_store, &vocab.encode_sequence(&f.events)))
        .collect()
}

/// Shared head-training loop: builds per-function loss graphs over frozen
/// states and early-stops on validation cared top-1.
#[allow(clippy::too_many_arguments)]
fn train_heads<FLoss>(
    corpus: &SplitCorpus,
    vocab: &Vocabulary,
    lm: &LstmLm,
    lm_store: &ParamStore,
    config: &TrainConfig,
    head_store: &mut ParamStore,
    point_loss: FLoss,
    metric: &dyn Fn(&ParamStore) -> f64,
) -> Result<TrainOutcome, TrainError>
where
    FLoss: Fn(&mut Graph, &FunctionEvents, &[LstmState], &RepPoint) -> Vid,
{
    let runs = frozen_runs(lm, lm_store, vocab, &corpus.train);

    let mut stopper = EarlyStopper::new(config.patience);
    let mut best_snapshot = head_store.snapshot();
    let mut log = Vec::new();
    let mut epochs_run = 0;
    let mut stopped_early = false;

    // group points by function for per-function batches
    let points_by_fn: Vec<Vec<RepPoint>> = {
        let mut by_fn: Vec<Vec<RepPoint>> = (0..corpus.train.len()).map(|_| Vec::new()).collect();
        let all = collect_points(&corpus.train, config.context_len);
        if all.is_empty() {
            return Err(TrainError::NoCaredPoints);
        }
        for p in all {
            by_fn[p.function].push(p);
        }
        by_fn
    };

    for epoch in 1..=config.max_epochs {
        epochs_run = epoch;
        let mut epoch_loss = 0.0;
        let mut counted = 0usize;
        for &idx in &epoch_order(corpus.train.len(), config.seed.wrapping_add(1), epoch) {
            let points = &points_by_fn[idx];
            if points.is_empty() {
                continue;
            }
            head_store.zero_grads();
            let (loss, grads) = {
                let mut g = Graph::new(head_store);
                let losses: Vec<Vid> = points
                    .iter()
                    .map(|p| point_loss(&mut g, &corpus.train[idx], &runs[idx], p))
                    .collect();
                let loss = g.mean(losses);
                (g.scalar(loss), g.backward(loss))
            };
            if !loss.is_finite() {
                return Err(TrainError::Divergence {
                    epoch,
                    function: corpus.train[idx].id.clone(),
                });
            }
            epoch_loss += loss;
            counted += 1;
            head_store.accumulate_grads(grads);
            clip_gradients(head_store, config.clip_lo, config.clip_hi);
            head_store.sgd_step(config.learning_rate);
        }
        let train_loss = if counted == 0 { 0.0 } else { epoch_loss / counted as f64 };

        let val_metric = metric(head_store);
        let stop = stopper.record(epoch, val_metric);
        if stopper.improved(epoch) {
            best_snapshot = head_store.snapshot();
        }
        log.push(EpochLog { epoch, train_loss, val_metric, best_so_far: stopper.best() });
        if stop {
            stopped_early = true;
            break;
        }
    }

    head_store.restore(&best_snapshot);
    Ok(TrainOutcome { best_epoch: stopper.best_epoch(), epochs_run, stopped_early, log })
}

/// Pointer target: equal mass on every context position whose raw text
/// matches the true next token. Empty when the token is not a repetition.
fn pointer_target(ctx_texts: &[&str], truth: &str) -> Option<Vec<f64>> {
    let matches: Vec<usize> = ctx_texts
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == truth)
        .map(|(i, _)| i)
        .collect();
    if matches.is_empty() {
        return None;
    }
    let mut target = vec![0.0; ctx_texts.len()];
    let mass = 1.0 / matches.len() as f64;
    for i in matches {
        target[i] = mass;
    }
    Some(target)
}

/// Train the repetition heads on the frozen language model. LM parameters
/// are never touched; only the returned head store learns.
pub fn train_rep(
    corpus: &SplitCorpus,
    vocab: &Vocabulary,
    lm: &LstmLm,
    lm_store: &ParamStore,
    config: &TrainConfig,
) -> Result<(RepHeadSet, ParamStore, TrainOutcome), TrainError> {
    let heads = RepHeadSet::new(config.heads.clone(), config.hidden_size)
        .expect("head config validated at load time");
    let mut head_store = ParamStore::new();
    heads.register(&mut head_store);
    head_store.init(config.seed.wrapping_add(1));

    let m = config.context_len;
    let variables_only = heads.variables_only();
    let heads_for_loss = heads.clone();
    let train_texts = train_content_texts(corpus);

    let outcome = train_heads(
        corpus,
        vocab,
        lm,
        lm_store,
        config,
        &mut head_store,
        move |g, function, run, point| {
            let event = &function.events[point.pos];
            let ctx = context_states(&function.events, run, point.pos, m, variables_only);
            if ctx.is_empty() {
                // variables-only filtering can empty a context that looked
                // nonempty when points were collected
                return g.value(vec![0.0]);
            }
            let group = heads_for_loss.group_for(&event.parent).to_string();
            let ctx_vids: Vec<Vid> =
                ctx.states.iter().map(|h| g.value(h.clone())).collect();
            let h_next = g.value(ctx.h_next.clone());
            let scores = heads_for_loss.pointer_scores_graph(g, &ctx_vids, h_next, &group);

            let ctx_texts: Vec<&str> = ctx.token_refs.iter().map(|t| t.text.as_str()).collect();
            let target = pointer_target(&ctx_texts, &event.text);
            let repeated = target.is_some();

            // mk from the current parameters, recomputed every step
            let mk = rep_argmax(&crate::numeric::stable_softmax(g.val(scores)));
            let decision_logits =
                heads_for_loss.decision_logits_graph(g, ctx_vids[mk], h_next, &group);
            let decision_target = if repeated { vec![1.0, 0.0] } else { vec![0.0, 1.0] };
            let eq4 = g.softmax_ce(decision_logits, decision_target);

            match target {
                Some(t) => {
                    let eq1 = g.softmax_ce(scores, t);
                    g.sum_scaled(vec![(eq1, 1.0), (eq4, 1.0)])
                }
                None => eq4,
            }
        },
        &|head_store| {
            let suggester = RepSuggester { heads: &heads, head_store, m };
            top1_accuracy(
                lm,
                lm_store,
                vocab,
                &suggester,
                &corpus.validation,
                "cared",
                &train_texts,
            )
        },
    )?;

    Ok((heads, head_store, outcome))
}

/// Train the attention-pointer baseline on the frozen language model.
pub fn train_ptr(
    corpus: &SplitCorpus,
    vocab: &Vocabulary,
    lm: &LstmLm,
    lm_store: &ParamStore,
    config: &TrainConfig,
) -> Result<(AttenPtrModel, ParamStore, TrainOutcome), TrainError> {
    let model = AttenPtrModel::new(config.hidden_size);
    let mut head_store = ParamStore::new();
    model.register(&mut head_store);
    head_store.init(config.seed.wrapping_add(2));

    let m = config.context_len;
    let train_texts = train_content_texts(corpus);

    let outcome = train_heads(
        corpus,
        vocab,
        lm,
        lm_store,
        config,
        &mut head_store,
        move |g, function, run, point| {
            let event = &function.events[point.pos];
            let ctx = context_states(&function.events, run, point.pos, m, false);
            let ctx_vids: Vec<Vid> =
                ctx.states.iter().map(|h| g.value(h.clone())).collect();
            let h_next = g.value(ctx.h_next.clone());
            let scores = model.scores_graph(g, &ctx_vids, h_next);

            let ctx_texts: Vec<&str> = ctx.token_refs.iter().map(|t| t.text.as_str()).collect();
            let target = pointer_target(&ctx_texts, &event.text);
            let repeated = target.is_some();

            let gate_logits = model.gate_logits_graph(g, h_next);
            let gate_target = if repeated { vec![1.0, 0.0] } else { vec![0.0, 1.0] };
            let gate_loss = g.softmax_ce(gate_logits, gate_target);

            match target {
                Some(t) => {
                    let ptr_loss = g.softmax_ce(scores, t);
                    g.sum_scaled(vec![(ptr_loss, 1.0), (gate_loss, 1.0)])
                }
                None => gate_loss,
            }
        },
        &|head_store| {
            let suggester = AttenPtrSuggester { model: &model, head_store, m };
            top1_accuracy(
                lm,
                lm_store,
                vocab,
                &suggester,
                &corpus.validation,
                "cared",
                &train_texts,
            )
        },
    )?;

    Ok((model, head_store, outcome))
}

/// Gradient check of the full differentiable chain on a 3-token toy:
/// embedding -> LSTM -> pointer scores and normalization -> repetition
/// decision, plus the LM's own cross-entropy terms.
pub fn end_to_end_grad_check(
    tolerance: f64,
    step: f64,
) -> Result<crate::numeric::GradCheckReport, crate::numeric::NumericError> {
    use crate::config::HeadMode;
    use crate::numeric::{grad_check, stable_softmax};
    use rand::Rng;

    let lm = LstmLm::new(LstmDims { vocab: 5, embed: 3, hidden: 4 });
    let heads = RepHeadSet::new(HeadMode::Single, 4).expect("single head");
    let mut store = ParamStore::new();
    lm.register(&mut store);
    heads.register(&mut store);
    store.init(7);
    // move every parameter off the zero-init saddle so the check exercises
    // nontrivial curvature
    let mut rng = seeded_rng(13);
    for name in store.names().to_vec() {
        for v in store.get_mut(&name).values.iter_mut() {
            *v += rng.gen_range(-0.2..0.2);
        }
    }

    let tokens = [1usize, 3, 2];
    let build = |s: &ParamStore| {
        let mut g = Graph::new(s);
        let mut state = lm.initial_state_graph(&mut g);
        let mut hs = Vec::new();
        let mut losses: Vec<(Vid, f64)> = Vec::new();
        for t in 0..tokens.len() {
            if t > 0 {
                let logits = lm.logits_graph(&mut g, state.1);
                losses.push((g.softmax_ce_index(logits, tokens[t]), 1.0));
            }
            state = lm.step_graph(&mut g, state, tokens[t]);
            hs.push(state.1);
        }
        let ctx = [hs[0], hs[1]];
        let h_next = hs[1];
        let scores = heads.pointer_scores_graph(&mut g, &ctx, h_next, "all");
        let eq1 = g.softmax_ce(scores, vec![0.5, 0.5]);
        let mk = rep_argmax(&stable_softmax(g.val(scores)));
        let decision = heads.decision_logits_graph(&mut g, ctx[mk], h_next, "all");
        let eq4 = g.softmax_ce(decision, vec![1.0, 0.0]);
        losses.push((eq1, 1.0));
        losses.push((eq4, 1.0));
        let loss = g.sum_scaled(losses);
        (g.scalar(loss), g.backward(loss))
    };

    grad_check(
        &mut store,
        tolerance,
        step,
        |s| build(s).0,
        |s| {
            let grads = build(s).1;
            s.accumulate_grads(grads);
        },
    )
}
