use std::time::Instant;
use tokrep::config::{HeadMode, TrainConfig};
use tokrep::corpus::synthetic::{adjacent_repeat_corpus, always_repeat_corpus, SyntheticOptions};
use tokrep::corpus::{split_corpus, Vocabulary};
use tokrep::model::{context_states, rep_argmax};
use tokrep::syntax::NodeClass;
use tokrep::train::{evaluate, train_lm, train_ptr, train_rep, AttenPtrSuggester, LstmSuggester, RepSuggester};

#[test]
fn scratch_learnability() {
    let t0 = Instant::now();
    let corpus = always_repeat_corpus(&SyntheticOptions { functions: 120, ..Default::default() });
    let corpus = split_corpus(corpus, 33).unwrap();
    let config = TrainConfig {
        context_len: 25,
        patience: 4,
        max_epochs: 15,
        seed: 5,
        learning_rate: 0.3,
        hidden_size: 24,
        embed_size: 16,
        unk_budget: 20,
        heads: HeadMode::Single,
        ..Default::default()
    };
    let vocab = Vocabulary::build(&corpus.train, config.unk_budget).unwrap();
    eprintln!("vocab: {} ids; t={:?}", vocab.len(), t0.elapsed());

    let (lm, lm_store, out) = train_lm(&corpus, &vocab, &config).unwrap();
    eprintln!("LM: epochs {} best {} metric {:.3}; t={:?}", out.epochs_run, out.best_epoch, out.log.last().unwrap().best_so_far, t0.elapsed());

    let (heads, head_store, rout) = train_rep(&corpus, &vocab, &lm, &lm_store, &config).unwrap();
    eprintln!("REP: epochs {} best {} metric {:.3}; t={:?}", rout.epochs_run, rout.best_epoch, rout.log.last().unwrap().best_so_far, t0.elapsed());

    let (ptr, ptr_store, pout) = train_ptr(&corpus, &vocab, &lm, &lm_store, &config).unwrap();
    eprintln!("PTR: epochs {} best {} metric {:.3}; t={:?}", pout.epochs_run, pout.best_epoch, pout.log.last().unwrap().best_so_far, t0.elapsed());

    let rep_report = evaluate(&lm, &lm_store, &vocab, &RepSuggester { heads: &heads, head_store: &head_store, m: 25 }, &corpus);
    let lstm_report = evaluate(&lm, &lm_store, &vocab, &LstmSuggester, &corpus);
    let ptr_report = evaluate(&lm, &lm_store, &vocab, &AttenPtrSuggester { model: &ptr, head_store: &ptr_store, m: 25 }, &corpus);
    eprintln!("LSTM  cared top1 {:.3} unseen top1 {:.3}", lstm_report.test.accuracy("cared", 1), lstm_report.test.accuracy("unseen-cared", 1));
    eprintln!("REP   cared top1 {:.3} unseen top1 {:.3}", rep_report.test.accuracy("cared", 1), rep_report.test.accuracy("unseen-cared", 1));
    eprintln!("PTR   cared top1 {:.3} unseen top1 {:.3}", ptr_report.test.accuracy("cared", 1), ptr_report.test.accuracy("unseen-cared", 1));
    eprintln!("total t={:?}", t0.elapsed());
}

#[test]
fn scratch_pointer_concentration() {
    let t0 = Instant::now();
    let corpus = adjacent_repeat_corpus(200, 6, 30, 17);
    let corpus = split_corpus(corpus, 8).unwrap();
    let config = TrainConfig {
        context_len: 25,
        patience: 10,
        max_epochs: 45,
        seed: 9,
        learning_rate: 1.0,
        hidden_size: 24,
        embed_size: 16,
        unk_budget: 1,
        heads: HeadMode::Single,
        ..Default::default()
    };
    let vocab = Vocabulary::build(&corpus.train, config.unk_budget).unwrap();
    let (lm, lm_store, out) = train_lm(&corpus, &vocab, &config).unwrap();
    eprintln!("LM: epochs {} best {} metric {:.3}; t={:?}", out.epochs_run, out.best_epoch, out.log.last().unwrap().best_so_far, t0.elapsed());
    let (heads, head_store, rout) = train_rep(&corpus, &vocab, &lm, &lm_store, &config).unwrap();
    eprintln!("REP: epochs {} best {} metric {:.3}; t={:?}", rout.epochs_run, rout.best_epoch, rout.log.last().unwrap().best_so_far, t0.elapsed());

    // mean pointer mass on the most recent cared entry at repeat positions
    let mut mass = 0.0;
    let mut count = 0usize;
    for function in &corpus.test {
        let ids = vocab.encode_sequence(&function.events);
        let run = lm.run(&lm_store, &ids);
        for (pos, event) in function.events.iter().enumerate() {
            if event.class != NodeClass::Cared || !event.content {
                continue;
            }
            let ctx = context_states(&function.events, &run, pos, 25, false);
            if ctx.is_empty() { continue; }
            let matches: Vec<usize> = ctx.token_refs.iter().enumerate()
                .filter(|(_, t)| t.text == event.text).map(|(i, _)| i).collect();
            if matches != vec![ctx.len() - 1] { continue; } // repeat of the most recent only
            let probs = heads.pointer_probs(&head_store, &ctx, "all");
            mass += probs[ctx.len() - 1];
            let _ = rep_argmax(&probs);
            count += 1;
        }
    }
    eprintln!("mean P(last) = {:.3} over {} points; t={:?}", mass / count as f64, count, t0.elapsed());
}
