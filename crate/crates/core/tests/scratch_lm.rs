use tokrep::config::{HeadMode, TrainConfig};
use tokrep::corpus::synthetic::adjacent_repeat_corpus;
use tokrep::corpus::{split_corpus, Vocabulary};
use tokrep::train::train_lm;

#[test]
fn scratch_lm_tuning() {
    for lr in [0.2, 0.5, 1.0, 2.0] {
        let corpus = adjacent_repeat_corpus(200, 6, 30, 17);
        let corpus = split_corpus(corpus, 8).unwrap();
        let config = TrainConfig {
            context_len: 25,
            patience: 10,
            max_epochs: 40,
            seed: 9,
            learning_rate: lr,
            hidden_size: 24,
            embed_size: 16,
            unk_budget: 1,
            heads: HeadMode::Single,
            ..Default::default()
        };
        let vocab = Vocabulary::build(&corpus.train, config.unk_budget).unwrap();
        let (_lm, _store, out) = train_lm(&corpus, &vocab, &config).unwrap();
        let tail: Vec<String> = out.log.iter().map(|l| format!("{:.3}", l.val_metric)).collect();
        eprintln!("lr={lr}: epochs {} best {} ({:.3}) log: {}", out.epochs_run, out.best_epoch, out.log.iter().map(|l|l.best_so_far).fold(0.0f64, f64::max), tail.join(" "));
    }
}
