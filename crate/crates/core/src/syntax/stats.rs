//! Repetition statistics over token-event corpora: how often a content
//! token's text re-occurs among eligible tokens in the preceding window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ast::NodeClass;
use super::ingest::FunctionEvents;

#[derive(Debug, thiserror::Error)]
#[error("empty corpus: no token events")]
pub struct EmptyCorpusError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BucketStats {
    pub class: NodeClass,
    pub parent: String,
    pub total: usize,
    pub repeated: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassAggregate {
    pub name: String,
    pub total: usize,
    pub repeated: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepetitionStats {
    pub window: usize,
    pub total_events: usize,
    pub content_events: usize,
    pub cared_events: usize,
    /// Cared content tokens as a fraction of all token events.
    pub cared_fraction: f64,
    /// Aggregates per node class, plus a `variables` row (cared ∧ var).
    pub classes: Vec<ClassAggregate>,
    /// Per (node-class × parent-kind) bucket over content tokens.
    pub buckets: Vec<BucketStats>,
}

impl RepetitionStats {
    pub fn bucket(&self, class: NodeClass, parent: &str) -> Option<&BucketStats> {
        self.buckets.iter().find(|b| b.class == class && b.parent == parent)
    }

    pub fn class_rate(&self, name: &str) -> Option<f64> {
        self.classes.iter().find(|c| c.name == name).map(|c| c.rate)
    }
}

/// A token "repeats" when an eligible content token with identical text
/// occurs among the previous `window` raw positions of the same function.
pub fn repetition_stats(
    functions: &[FunctionEvents],
    window: usize,
) -> Result<RepetitionStats, EmptyCorpusError> {
    assert!(window >= 1, "window must be >= 1");
    let total_events: usize = functions.iter().map(|f| f.events.len()).sum();
    if total_events == 0 {
        return Err(EmptyCorpusError);
    }

    let mut buckets: BTreeMap<(NodeClass, String), (usize, usize)> = BTreeMap::new();
    let mut class_counts: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
    let mut content_events = 0usize;
    let mut cared_events = 0usize;

    for function in functions {
        let events = &function.events;
        for (pos, event) in events.iter().enumerate() {
            if !event.content {
                continue;
            }
            content_events += 1;
            if event.class == NodeClass::Cared {
                cared_events += 1;
            }
            let lo = pos.saturating_sub(window);
            let prior = &events[lo..pos];

            let bucket_hit = prior.iter().any(|p| {
                p.content && p.class == event.class && p.parent == event.parent && p.text == event.text
            });
            let entry = buckets.entry((event.class, event.parent.clone())).or_insert((0, 0));
            entry.0 += 1;
            if bucket_hit {
                entry.1 += 1;
            }

            let class_hit = prior
                .iter()
                .any(|p| p.content && p.class == event.class && p.text == event.text);
            let centry = class_counts.entry(event.class.name()).or_insert((0, 0));
            centry.0 += 1;
            if class_hit {
                centry.1 += 1;
            }

            if event.var {
                let var_hit = prior.iter().any(|p| p.var && p.text == event.text);
                let ventry = class_counts.entry("variables").or_insert((0, 0));
                ventry.0 += 1;
                if var_hit {
                    ventry.1 += 1;
                }
            }
        }
    }

    let rate = |repeated: usize, total: usize| {
        if total == 0 {
            0.0
        } else {
            repeated as f64 / total as f64
        }
    };

    Ok(RepetitionStats {
        window,
        total_events,
        content_events,
        cared_events,
        cared_fraction: cared_events as f64 / total_events as f64,
        classes: class_counts
            .into_iter()
            .map(|(name, (total, repeated))| ClassAggregate {
                name: name.to_string(),
                total,
                repeated,
                rate: rate(repeated, total),
            })
            .collect(),
        buckets: buckets
            .into_iter()
            .map(|((class, parent), (total, repeated))| BucketStats {
                class,
                parent,
                total,
                repeated,
                rate: rate(repeated, total),
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::events::TokenEvent;

    fn event(pos: usize, text: &str, content: bool, class: NodeClass, var: bool) -> TokenEvent {
        TokenEvent {
            function: "f".into(),
            pos,
            text: text.into(),
            content,
            class,
            var,
            parent: "Assignment".into(),
        }
    }

    fn cared(pos: usize, text: &str) -> TokenEvent {
        event(pos, text, true, NodeClass::Cared, true)
    }

    #[test]
    fn first_occurrence_is_unrepeatable() {
        // cared tokens [x, x] within the window: rate 1/2
        let functions = vec![FunctionEvents {
            id: "f".into(),
            events: vec![cared(0, "x"), cared(1, "x")],
        }];
        let stats = repetition_stats(&functions, 5).unwrap();
        assert_eq!(stats.class_rate("cared"), Some(0.5));
        let bucket = stats.bucket(NodeClass::Cared, "Assignment").unwrap();
        assert_eq!((bucket.total, bucket.repeated), (2, 1));
    }

    #[test]
    fn no_duplicates_means_zero_rates() {
        let functions = vec![FunctionEvents {
            id: "f".into(),
            events: vec![cared(0, "a"), cared(1, "b"), cared(2, "c")],
        }];
        let stats = repetition_stats(&functions, 10).unwrap();
        assert!(stats.classes.iter().all(|c| c.rate == 0.0));
    }

    #[test]
    fn window_limits_lookback() {
        let mut events: Vec<TokenEvent> = Vec::new();
        events.push(cared(0, "x"));
        for i in 1..=5 {
            events.push(event(i, "pad", true, NodeClass::NotSimpleName, false));
        }
        events.push(cared(6, "x"));
        let functions = vec![FunctionEvents { id: "f".into(), events }];
        // x at pos 6 looks back to pos >= 1: the first x is out of the window
        let stats = repetition_stats(&functions, 5).unwrap();
        assert_eq!(stats.class_rate("cared"), Some(0.0));
        let stats = repetition_stats(&functions, 6).unwrap();
        assert_eq!(stats.class_rate("cared"), Some(0.5));
    }

    #[test]
    fn windows_do_not_cross_functions() {
        let functions = vec![
            FunctionEvents { id: "a".into(), events: vec![cared(0, "x")] },
            FunctionEvents { id: "b".into(), events: vec![cared(0, "x")] },
        ];
        let stats = repetition_stats(&functions, 25).unwrap();
        assert_eq!(stats.class_rate("cared"), Some(0.0));
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(repetition_stats(&[], 25).is_err());
    }

    #[test]
    fn brute_force_oracle_on_random_sequence() {
        // independent oracle: direct window re-scan per position
        let texts = ["a", "b", "a", "c", "a", "b", "d", "a"];
        let events: Vec<TokenEvent> =
            texts.iter().enumerate().map(|(i, t)| cared(i, t)).collect();
        let m = 3usize;
        let mut expected_repeated = 0;
        for i in 0..texts.len() {
            let lo = i.saturating_sub(m);
            if texts[lo..i].contains(&texts[i]) {
                expected_repeated += 1;
            }
        }
        let functions = vec![FunctionEvents { id: "f".into(), events }];
        let stats = repetition_stats(&functions, m).unwrap();
        let cared_row = stats.classes.iter().find(|c| c.name == "cared").unwrap();
        assert_eq!(cared_row.repeated, expected_repeated);
    }
}
