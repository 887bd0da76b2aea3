//! `tokrep` command line: the full pipeline from a directory of Java files
//! to trained models and Table-style comparison reports, plus interactive
//! next-token suggestions.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numeric
//! failure.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tokrep::artifact::{self, ArtifactError};
use tokrep::config::{ConfigError, ModelSelector, RunConfig};
use tokrep::corpus::{split_corpus, SplitCorpus, SplitIds, Vocabulary};
use tokrep::model::{
    context_states, mix_distributions, rep_argmax, AttenPtrModel, LstmLm, RepHeadSet,
};
use tokrep::numeric::ParamStore;
use tokrep::syntax::{
    group_events, ingest_dir, parse_java, read_events_jsonl, repetition_stats, resolve_variables,
    write_events_jsonl, FilterRuleSet, FunctionEvents, NodeKind,
};
use tokrep::train::{
    compare_models, end_to_end_grad_check, evaluate, load_checkpoint, render_comparison,
    render_report, save_checkpoint, train_lm, train_ptr, train_rep, AttenPtrSuggester,
    CheckpointKind, EvalReport, LstmSuggester, RepSuggester, TrainError, TrainOutcome,
};

#[derive(Parser)]
#[command(name = "tokrep", version, about = "Token repetition learning for Java code completion")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Plain-text `key = value` config file; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory of `.java` files.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Working directory for artifacts.
    #[arg(long, global = true)]
    work: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "context-len", global = true)]
    context_len: Option<usize>,
    #[arg(long, global = true)]
    patience: Option<usize>,
    #[arg(long = "max-epochs", global = true)]
    max_epochs: Option<usize>,
    #[arg(long = "learning-rate", global = true)]
    learning_rate: Option<f64>,
    #[arg(long = "hidden-size", global = true)]
    hidden_size: Option<usize>,
    #[arg(long = "embed-size", global = true)]
    embed_size: Option<usize>,
    #[arg(long = "unk-budget", global = true)]
    unk_budget: Option<usize>,
    /// single | per-kind:Kind,... | variables-only
    #[arg(long, global = true)]
    heads: Option<String>,
    /// lstm | rep | atten-ptr
    #[arg(long, global = true)]
    model: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the corpus and write the token-event file.
    Tokenize,
    /// Repetition statistics over the token-event file.
    Stats,
    /// Deterministic 60/20/20 function split.
    Split,
    /// Build the vocabulary from the training split.
    Vocab,
    /// Train the LSTM language model.
    TrainLm,
    /// Train the repetition heads on the frozen language model.
    TrainRep,
    /// Train the attention-pointer baseline on the frozen language model.
    TrainPtr,
    /// Evaluate the selected model on validation and test splits.
    Eval,
    /// Side-by-side table of every evaluated model.
    Compare,
    /// Top-k suggestions for the next content token after a code prefix.
    Suggest {
        /// File holding the code prefix (closed with synthetic braces if needed).
        prefix: PathBuf,
        #[arg(short, default_value_t = 10)]
        k: usize,
    },
    /// End-to-end gradient check of the differentiable chain.
    Gradcheck,
}

enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ArtifactError> for CliError {
    fn from(e: ArtifactError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Divergence { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through this path too
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load_config(overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &overrides.config {
        let body = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        config.parse_file(&body)?;
    }
    if let Some(v) = &overrides.corpus {
        config.corpus_dir = v.clone();
    }
    if let Some(v) = &overrides.work {
        config.work_dir = v.clone();
    }
    if let Some(v) = overrides.seed {
        config.train.seed = v;
    }
    if let Some(v) = overrides.context_len {
        config.train.context_len = v;
    }
    if let Some(v) = overrides.patience {
        config.train.patience = v;
    }
    if let Some(v) = overrides.max_epochs {
        config.train.max_epochs = v;
    }
    if let Some(v) = overrides.learning_rate {
        config.train.learning_rate = v;
    }
    if let Some(v) = overrides.hidden_size {
        config.train.hidden_size = v;
    }
    if let Some(v) = overrides.embed_size {
        config.train.embed_size = v;
    }
    if let Some(v) = overrides.unk_budget {
        config.train.unk_budget = v;
    }
    if let Some(v) = &overrides.heads {
        config.train.heads = v
            .parse()
            .map_err(|e: String| CliError::Usage(format!("--heads: {e}")))?;
    }
    if let Some(v) = &overrides.model {
        config.model =
            v.parse().map_err(|e: String| CliError::Usage(format!("--model: {e}")))?;
    }
    // validate per-kind routing eagerly: unknown kinds are config errors
    RepHeadSet::new(config.train.heads.clone(), config.train.hidden_size)
        .map_err(CliError::from)?;
    Ok(config)
}

/// One command at a time per work dir.
struct WorkLock {
    path: PathBuf,
}

impl WorkLock {
    fn acquire(work_dir: &Path) -> Result<WorkLock, CliError> {
        fs::create_dir_all(work_dir)?;
        let path = work_dir.join(".lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(WorkLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(CliError::Data(
                format!("work dir is locked by another command: {}", path.display()),
            )),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for WorkLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

struct Paths {
    events: PathBuf,
    summary: PathBuf,
    stats: PathBuf,
    splits: PathBuf,
    vocab: PathBuf,
    heads: PathBuf,
    compare_json: PathBuf,
    compare_txt: PathBuf,
}

impl Paths {
    fn new(work: &Path) -> Paths {
        Paths {
            events: work.join("events.jsonl"),
            summary: work.join("ingest-summary.json"),
            stats: work.join("stats.json"),
            splits: work.join("splits.json"),
            vocab: work.join("vocab.json"),
            heads: work.join("heads.json"),
            compare_json: work.join("compare.json"),
            compare_txt: work.join("compare.txt"),
        }
    }

    fn checkpoint(&self, work: &Path, model: ModelSelector) -> PathBuf {
        match model {
            ModelSelector::Lstm => work.join("lm.ckpt.json"),
            ModelSelector::Rep => work.join("rep.ckpt.json"),
            ModelSelector::AttenPtr => work.join("ptr.ckpt.json"),
        }
    }

    fn report(&self, work: &Path, model: ModelSelector) -> PathBuf {
        work.join(format!("report-{}.json", model.label()))
    }

    fn report_txt(&self, work: &Path, model: ModelSelector) -> PathBuf {
        work.join(format!("report-{}.txt", model.label()))
    }

    fn train_log(&self, work: &Path, model: ModelSelector) -> PathBuf {
        work.join("logs").join(format!("train-{}.jsonl", model.label()))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(&cli.overrides)?;
    let work = config.work_dir.clone();
    let _lock = WorkLock::acquire(&work)?;
    let paths = Paths::new(&work);
    let hash = config.train.hash();

    match cli.command {
        Command::Tokenize => cmd_tokenize(&config, &paths, &hash),
        Command::Stats => cmd_stats(&config, &paths, &hash),
        Command::Split => cmd_split(&config, &paths, &hash),
        Command::Vocab => cmd_vocab(&config, &paths, &hash),
        Command::TrainLm => cmd_train_lm(&config, &paths, &hash),
        Command::TrainRep => cmd_train_heads(&config, &paths, &hash, ModelSelector::Rep),
        Command::TrainPtr => cmd_train_heads(&config, &paths, &hash, ModelSelector::AttenPtr),
        Command::Eval => cmd_eval(&config, &paths, &hash),
        Command::Compare => cmd_compare(&config, &paths, &hash),
        Command::Suggest { prefix, k } => cmd_suggest(&config, &paths, &hash, &prefix, k),
        Command::Gradcheck => cmd_gradcheck(),
    }
}

fn cmd_tokenize(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    if !config.corpus_dir.is_dir() {
        return Err(CliError::Data(format!(
            "corpus dir {} is not a readable directory",
            config.corpus_dir.display()
        )));
    }
    let rules = FilterRuleSet::standard();
    let (functions, summary) = ingest_dir(&config.corpus_dir, &rules)?;
    if functions.is_empty() {
        return Err(CliError::Data(format!(
            "no parseable .java files under {} ({} skipped)",
            config.corpus_dir.display(),
            summary.files_skipped.len()
        )));
    }
    let mut buf = Vec::new();
    for function in &functions {
        write_events_jsonl(&mut buf, &function.events)?;
    }
    artifact::write_atomic(&paths.events, &buf)?;
    artifact::write_json(&paths.summary, hash, &summary)?;
    println!(
        "tokenized {} files into {} functions ({} events); {} skipped",
        summary.files_parsed,
        summary.functions,
        summary.events,
        summary.files_skipped.len()
    );
    for skip in &summary.files_skipped {
        println!("  skipped {}: {}", skip.path, skip.reason);
    }
    Ok(())
}

fn read_functions(paths: &Paths) -> Result<Vec<FunctionEvents>, CliError> {
    let file = File::open(&paths.events).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::Data(format!("{} not found: run `tokrep tokenize` first", paths.events.display()))
        } else {
            e.into()
        }
    })?;
    let events = read_events_jsonl(BufReader::new(file))?;
    Ok(group_events(events))
}

fn cmd_stats(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    let functions = read_functions(paths)?;
    let stats = repetition_stats(&functions, config.train.context_len)
        .map_err(|e| CliError::Data(e.to_string()))?;
    artifact::write_json(&paths.stats, hash, &stats)?;
    println!(
        "window {}: {} events, {} content tokens, cared fraction {:.3}",
        stats.window, stats.total_events, stats.content_events, stats.cared_fraction
    );
    for class in &stats.classes {
        println!(
            "  {:<12} total {:>7}  repeated {:>7}  rate {:.3}",
            class.name, class.total, class.repeated, class.rate
        );
    }
    Ok(())
}

fn cmd_split(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    let functions = read_functions(paths)?;
    let corpus = split_corpus(functions, config.train.seed)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let ids = SplitIds::of(&corpus, config.train.seed);
    ids.save(&paths.splits, hash)?;
    let (train, val, test) = corpus.function_counts();
    println!("split {} functions: {train} train / {val} validation / {test} test", train + val + test);
    Ok(())
}

fn load_split(paths: &Paths, hash: &str) -> Result<SplitCorpus, CliError> {
    let functions = read_functions(paths)?;
    let ids = SplitIds::load(&paths.splits, Some(hash))?;
    ids.resolve(functions).map_err(|e| CliError::Data(e.to_string()))
}

fn cmd_vocab(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    let corpus = load_split(paths, hash)?;
    let vocab = Vocabulary::build(&corpus.train, config.train.unk_budget)
        .map_err(|e| CliError::Data(e.to_string()))?;
    vocab.save(&paths.vocab, hash)?;
    println!(
        "vocabulary: {} ids ({} distinct training tokens, {} mapped to UNK)",
        vocab.len(),
        vocab.distinct_training_tokens(),
        vocab.unk_count()
    );
    Ok(())
}

fn write_train_log(path: &Path, outcome: &TrainOutcome) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    for line in &outcome.log {
        serde_json::to_writer(&mut w, line).map_err(|e| CliError::Data(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_train_lm(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    let corpus = load_split(paths, hash)?;
    let vocab = Vocabulary::load(&paths.vocab, Some(hash))?;
    let (lm, store, outcome) = train_lm(&corpus, &vocab, &config.train)?;
    let ckpt = paths.checkpoint(&config.work_dir, ModelSelector::Lstm);
    save_checkpoint(&ckpt, hash, CheckpointKind::Lm { dims: lm.dims }, &store)?;
    write_train_log(&paths.train_log(&config.work_dir, ModelSelector::Lstm), &outcome)?;
    println!(
        "trained language model: {} epochs (best {}), stored {}",
        outcome.epochs_run,
        outcome.best_epoch,
        ckpt.display()
    );
    Ok(())
}

fn load_lm(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(LstmLm, ParamStore), CliError> {
    let ckpt = load_checkpoint(&paths.checkpoint(&config.work_dir, ModelSelector::Lstm), Some(hash))?;
    match ckpt.kind.clone() {
        CheckpointKind::Lm { dims } => Ok((LstmLm::new(dims), ckpt.into_store())),
        _ => Err(CliError::Data("lm.ckpt.json does not hold a language model".into())),
    }
}

fn cmd_train_heads(
    config: &RunConfig,
    paths: &Paths,
    hash: &str,
    which: ModelSelector,
) -> Result<(), CliError> {
    let corpus = load_split(paths, hash)?;
    let vocab = Vocabulary::load(&paths.vocab, Some(hash))?;
    let (lm, lm_store) = load_lm(config, paths, hash)?;
    let ckpt_path = paths.checkpoint(&config.work_dir, which);

    let outcome = match which {
        ModelSelector::Rep => {
            let (heads, head_store, outcome) =
                train_rep(&corpus, &vocab, &lm, &lm_store, &config.train)?;
            save_checkpoint(
                &ckpt_path,
                hash,
                CheckpointKind::Rep { heads: config.train.heads.clone(), hidden: heads.hidden },
                &head_store,
            )?;
            artifact::write_json(&paths.heads, hash, &config.train.heads)?;
            outcome
        }
        ModelSelector::AttenPtr => {
            let (model, head_store, outcome) =
                train_ptr(&corpus, &vocab, &lm, &lm_store, &config.train)?;
            save_checkpoint(
                &ckpt_path,
                hash,
                CheckpointKind::AttenPtr { hidden: model.hidden },
                &head_store,
            )?;
            outcome
        }
        ModelSelector::Lstm => unreachable!("train-lm has its own command"),
    };
    write_train_log(&paths.train_log(&config.work_dir, which), &outcome)?;
    println!(
        "trained {}: {} epochs (best {}), stored {}",
        which.label(),
        outcome.epochs_run,
        outcome.best_epoch,
        ckpt_path.display()
    );
    Ok(())
}

fn eval_one(
    config: &RunConfig,
    paths: &Paths,
    hash: &str,
    model: ModelSelector,
    corpus: &SplitCorpus,
    vocab: &Vocabulary,
    lm: &LstmLm,
    lm_store: &ParamStore,
) -> Result<EvalReport, CliError> {
    let m = config.train.context_len;
    let report = match model {
        ModelSelector::Lstm => evaluate(lm, lm_store, vocab, &LstmSuggester, corpus),
        ModelSelector::Rep => {
            let ckpt = load_checkpoint(&paths.checkpoint(&config.work_dir, model), Some(hash))?;
            let CheckpointKind::Rep { heads, hidden } = ckpt.kind.clone() else {
                return Err(CliError::Data("rep.ckpt.json does not hold repetition heads".into()));
            };
            let heads = RepHeadSet::new(heads, hidden).map_err(CliError::from)?;
            let head_store = ckpt.into_store();
            evaluate(lm, lm_store, vocab, &RepSuggester { heads: &heads, head_store: &head_store, m }, corpus)
        }
        ModelSelector::AttenPtr => {
            let ckpt = load_checkpoint(&paths.checkpoint(&config.work_dir, model), Some(hash))?;
            let CheckpointKind::AttenPtr { hidden } = ckpt.kind.clone() else {
                return Err(CliError::Data("ptr.ckpt.json does not hold the attention pointer".into()));
            };
            let model = AttenPtrModel::new(hidden);
            let head_store = ckpt.into_store();
            evaluate(lm, lm_store, vocab, &AttenPtrSuggester { model: &model, head_store: &head_store, m }, corpus)
        }
    };
    Ok(report)
}

fn cmd_eval(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    let corpus = load_split(paths, hash)?;
    let vocab = Vocabulary::load(&paths.vocab, Some(hash))?;
    let (lm, lm_store) = load_lm(config, paths, hash)?;
    let report = eval_one(config, paths, hash, config.model, &corpus, &vocab, &lm, &lm_store)?;
    let text = render_report(&report);
    artifact::write_json(&paths.report(&config.work_dir, config.model), hash, &report)?;
    artifact::write_atomic(&paths.report_txt(&config.work_dir, config.model), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn cmd_compare(config: &RunConfig, paths: &Paths, hash: &str) -> Result<(), CliError> {
    let mut reports = Vec::new();
    for model in [ModelSelector::Lstm, ModelSelector::AttenPtr, ModelSelector::Rep] {
        let path = paths.report(&config.work_dir, model);
        if path.exists() {
            let report: EvalReport = artifact::read_json(&path, Some(hash))?;
            reports.push(report);
        }
    }
    if reports.is_empty() {
        return Err(CliError::Data(
            "no evaluation reports found: run `tokrep eval --model ...` first".into(),
        ));
    }
    let comparison = compare_models(&reports).map_err(|e| CliError::Data(e.to_string()))?;
    let text = render_comparison(&comparison);
    artifact::write_json(&paths.compare_json, hash, &comparison)?;
    artifact::write_atomic(&paths.compare_txt, text.as_bytes())?;
    print!("{text}");
    Ok(())
}

/// Parse a code prefix leniently: as-is, with synthetic closers appended,
/// and wrapped in a synthetic class (for member-level snippets).
fn parse_prefix(source: &str) -> Result<tokrep::syntax::AstNode, CliError> {
    let closers = synthetic_closers(source);
    let candidates = [
        source.to_string(),
        format!("{source}{closers}"),
        format!("{source}{closers};"),
        format!("{source};{closers}"),
        format!("class __Snippet {{\n{source}\n}}"),
        format!("class __Snippet {{\n{source}{closers}\n}}"),
        format!("class __Snippet {{\n{source}{closers};\n}}"),
    ];
    let mut last_err = String::new();
    for candidate in candidates {
        match parse_java(&candidate) {
            Ok(root) => return Ok(root),
            Err(e) => last_err = e.to_string(),
        }
    }
    Err(CliError::Data(format!("unparseable prefix: {last_err}")))
}

fn synthetic_closers(source: &str) -> String {
    let mut stack = Vec::new();
    let mut chars = source.chars().peekable();
    let mut in_string = false;
    let mut in_char = false;
    while let Some(c) = chars.next() {
        match c {
            '\\' if in_string || in_char => {
                chars.next();
            }
            '"' if !in_char => in_string = !in_string,
            '\'' if !in_string => in_char = !in_char,
            '{' if !in_string && !in_char => stack.push('}'),
            '(' if !in_string && !in_char => stack.push(')'),
            '[' if !in_string && !in_char => stack.push(']'),
            '}' | ')' | ']' if !in_string && !in_char => {
                stack.pop();
            }
            _ => {}
        }
    }
    stack.into_iter().rev().collect()
}

fn cmd_suggest(
    config: &RunConfig,
    paths: &Paths,
    hash: &str,
    prefix: &Path,
    k: usize,
) -> Result<(), CliError> {
    let source = fs::read_to_string(prefix)?;
    let mut root = parse_prefix(&source)?;
    resolve_variables(&mut root);

    // last method with a body is the function being completed
    let rules = FilterRuleSet::standard();
    let mut methods = Vec::new();
    collect_methods(&root, &mut methods);
    let Some(method) = methods.last() else {
        return Err(CliError::Data("prefix holds no method body to complete".into()));
    };
    let events = tokrep::syntax::linearize(method, &rules, "prefix");

    let vocab = Vocabulary::load(&paths.vocab, Some(hash))?;
    let (lm, lm_store) = load_lm(config, paths, hash)?;
    let ids = vocab.encode_sequence(&events);
    let run = lm.run(&lm_store, &ids);
    let end = events.len();
    let lm_dist = lm.next_distribution(&lm_store, &run[end]);
    let m = config.train.context_len;
    let ctx = context_states(&events, &run, end, m, false);

    let candidates = match config.model {
        ModelSelector::Lstm => {
            println!("model lstm: language-model candidates only");
            mix_distributions(&lm_dist, &vocab, &[], 0.0, &[])
        }
        ModelSelector::Rep => {
            let ckpt = load_checkpoint(&paths.checkpoint(&config.work_dir, ModelSelector::Rep), Some(hash))?;
            let CheckpointKind::Rep { heads, hidden } = ckpt.kind.clone() else {
                return Err(CliError::Data("rep.ckpt.json does not hold repetition heads".into()));
            };
            let heads = RepHeadSet::new(heads, hidden).map_err(CliError::from)?;
            let head_store = ckpt.into_store();
            if ctx.is_empty() {
                println!("no cared tokens in the last {m} tokens: language model only");
                mix_distributions(&lm_dist, &vocab, &[], 0.0, &[])
            } else {
                let group = heads.group_for(
                    events.last().map(|e| e.parent.as_str()).unwrap_or(NodeKind::Unknown.name()),
                );
                let pointer = heads.pointer_probs(&head_store, &ctx, group);
                let mk = rep_argmax(&pointer);
                let p_rep = heads.decision(&head_store, &ctx, mk, group);
                println!(
                    "repetition gate P(repeated) = {p_rep:.3}; pointer target `{}`",
                    ctx.token_refs[mk].text
                );
                let ctx_tokens: Vec<&str> =
                    ctx.token_refs.iter().map(|t| t.text.as_str()).collect();
                mix_distributions(&lm_dist, &vocab, &pointer, p_rep, &ctx_tokens)
            }
        }
        ModelSelector::AttenPtr => {
            let ckpt = load_checkpoint(&paths.checkpoint(&config.work_dir, ModelSelector::AttenPtr), Some(hash))?;
            let CheckpointKind::AttenPtr { hidden } = ckpt.kind.clone() else {
                return Err(CliError::Data("ptr.ckpt.json does not hold the attention pointer".into()));
            };
            let model = AttenPtrModel::new(hidden);
            let head_store = ckpt.into_store();
            if ctx.is_empty() {
                println!("no cared tokens in the last {m} tokens: language model only");
                mix_distributions(&lm_dist, &vocab, &[], 0.0, &[])
            } else {
                let gate = model.gate(&head_store, &ctx.h_next);
                println!("mixture gate g = {gate:.3}");
                model.forward(&head_store, &ctx, &lm_dist, &vocab)
            }
        }
    };

    for (rank, (token, prob)) in candidates.iter().take(k).enumerate() {
        println!("{:>2}. {:<24} {:.4}", rank + 1, token, prob);
    }
    Ok(())
}

fn collect_methods<'a>(node: &'a tokrep::syntax::AstNode, out: &mut Vec<&'a tokrep::syntax::AstNode>) {
    if node.kind == NodeKind::MethodDeclaration {
        if node.children.iter().any(|c| c.kind == NodeKind::Block) {
            out.push(node);
        }
        return;
    }
    for child in &node.children {
        collect_methods(child, out);
    }
}

fn cmd_gradcheck() -> Result<(), CliError> {
    let report = end_to_end_grad_check(1e-4, 1e-5)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    for param in &report.per_param {
        println!(
            "{:<16} max rel err {:.3e} over {} components",
            param.name, param.max_rel_err, param.checked
        );
    }
    println!(
        "max relative error {:.3e} (tolerance {:.0e}): {}",
        report.max_rel_err,
        report.tolerance,
        if report.pass { "PASS" } else { "FAIL" }
    );
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Numeric("gradient check failed".into()))
    }
}
