//! Synthetic token-event corpora for learnability runs and benchmarks.
//!
//! `always_repeat_corpus` builds functions where every cared token after its
//! first occurrence repeats a cared token within a short window, and each
//! function's dominant identifier is unique to that function (so test-split
//! occurrences are unseen in training). `zero_repetition_corpus` builds
//! functions whose cared tokens never repeat at all.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{FunctionEvents, NodeClass, TokenEvent};

#[derive(Debug, Clone)]
pub struct SyntheticOptions {
    pub functions: usize,
    /// Size of the pool of identifiers shared across functions (seen tokens).
    pub shared_pool: usize,
    /// Uses of the shared identifier after its introduction.
    pub shared_uses: usize,
    /// Uses of the function-unique identifier after its introduction.
    pub unique_uses: usize,
    /// Grammar tokens emitted between the shared and unique runs; anything
    /// larger than the context length keeps the two runs out of each
    /// other's windows.
    pub run_gap: usize,
    pub seed: u64,
}

impl Default for SyntheticOptions {
    fn default() -> Self {
        SyntheticOptions {
            functions: 500,
            shared_pool: 20,
            shared_uses: 3,
            unique_uses: 40,
            run_gap: 26,
            seed: 7,
        }
    }
}

struct Builder {
    events: Vec<TokenEvent>,
    function: String,
}

impl Builder {
    fn new(function: String) -> Self {
        Builder { events: Vec::new(), function }
    }

    fn grammar(&mut self, text: &str) {
        let pos = self.events.len();
        self.events.push(TokenEvent {
            function: self.function.clone(),
            pos,
            text: text.to_string(),
            content: false,
            class: NodeClass::NotSimpleName,
            var: false,
            parent: "Block".to_string(),
        });
    }

    fn cared(&mut self, text: &str) {
        self.grammar("SimpleName");
        let pos = self.events.len();
        self.events.push(TokenEvent {
            function: self.function.clone(),
            pos,
            text: text.to_string(),
            content: true,
            class: NodeClass::Cared,
            var: true,
            parent: "Assignment".to_string(),
        });
    }

    fn finish(mut self) -> FunctionEvents {
        for (i, e) in self.events.iter_mut().enumerate() {
            e.pos = i;
        }
        FunctionEvents { id: self.function.clone(), events: self.events }
    }
}

/// Every cared token except first occurrences repeats a same-text cared
/// token within the previous few raw positions. The shared identifier run
/// comes first, then the unique identifier run dominates the function.
pub fn always_repeat_corpus(opts: &SyntheticOptions) -> Vec<FunctionEvents> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.functions)
        .map(|f| {
            let mut b = Builder::new(format!("synthetic#{f}"));
            b.grammar("MethodDeclaration");
            b.grammar("Block");
            let shared = format!("s{}", rng.gen_range(0..opts.shared_pool));
            b.cared(&shared);
            for k in 0..opts.shared_uses {
                if k % 2 == 0 {
                    b.grammar("ExpressionStatement");
                }
                b.cared(&shared);
            }
            for _ in 0..opts.run_gap {
                b.grammar("IfStatement");
            }
            let unique = format!("u{f}");
            b.cared(&unique);
            for k in 0..opts.unique_uses {
                if k % 2 == 0 {
                    b.grammar("ExpressionStatement");
                }
                b.cared(&unique);
            }
            b.grammar("ReturnStatement");
            b.finish()
        })
        .collect()
}

/// Adjacent-repeat corpus: cared tokens come in `id id` pairs with the ids
/// of one function all distinct and drawn from a shared pool. At every
/// second element of a pair the unique matching context entry is the most
/// recent cared token.
pub fn adjacent_repeat_corpus(
    functions: usize,
    pairs_per_function: usize,
    pool: usize,
    seed: u64,
) -> Vec<FunctionEvents> {
    assert!(pairs_per_function <= pool, "need distinct ids within a function");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..functions)
        .map(|f| {
            let mut b = Builder::new(format!("pairs#{f}"));
            b.grammar("MethodDeclaration");
            b.grammar("Block");
            let mut ids: Vec<usize> = (0..pool).collect();
            ids.shuffle(&mut rng);
            for &id in ids.iter().take(pairs_per_function) {
                let name = format!("p{id}");
                b.cared(&name);
                b.grammar("ExpressionStatement");
                b.cared(&name);
                b.grammar("EmptyStatement");
            }
            b.grammar("ReturnStatement");
            b.finish()
        })
        .collect()
}

/// Cared tokens are globally unique: no text ever repeats.
pub fn zero_repetition_corpus(functions: usize, cared_per_function: usize) -> Vec<FunctionEvents> {
    (0..functions)
        .map(|f| {
            let mut b = Builder::new(format!("norepeat#{f}"));
            b.grammar("MethodDeclaration");
            b.grammar("Block");
            for i in 0..cared_per_function {
                if i % 2 == 0 {
                    b.grammar("ExpressionStatement");
                }
                b.cared(&format!("z{f}_{i}"));
            }
            b.grammar("ReturnStatement");
            b.finish()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::repetition_stats;

    #[test]
    fn always_repeat_has_high_cared_repetition() {
        let corpus = always_repeat_corpus(&SyntheticOptions {
            functions: 30,
            ..SyntheticOptions::default()
        });
        let stats = repetition_stats(&corpus, 25).unwrap();
        let cared = stats.class_rate("cared").unwrap();
        assert!(cared > 0.9, "cared repetition rate {cared} should be high");
    }

    #[test]
    fn zero_repetition_has_no_repeats() {
        let corpus = zero_repetition_corpus(30, 8);
        let stats = repetition_stats(&corpus, 50).unwrap();
        assert_eq!(stats.class_rate("cared"), Some(0.0));
    }

    #[test]
    fn unique_identifiers_differ_across_functions() {
        let corpus = always_repeat_corpus(&SyntheticOptions {
            functions: 5,
            ..SyntheticOptions::default()
        });
        let texts: Vec<Vec<&str>> = corpus
            .iter()
            .map(|f| {
                f.events
                    .iter()
                    .filter(|e| e.content && e.text.starts_with('u'))
                    .map(|e| e.text.as_str())
                    .collect()
            })
            .collect();
        assert!(texts[0].iter().all(|t| *t == "u0"));
        assert!(texts[4].iter().all(|t| *t == "u4"));
    }

    #[test]
    fn generation_is_deterministic() {
        let opts = SyntheticOptions { functions: 10, ..SyntheticOptions::default() };
        assert_eq!(always_repeat_corpus(&opts), always_repeat_corpus(&opts));
    }
}
