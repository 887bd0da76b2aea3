//! Corpus ingestion: walk a directory of `.java` files, parse each, resolve
//! variables, and linearize every top-level method body into an independent
//! token-event sequence. Files that fail to parse are skipped and recorded.
//! Output ordering is fixed: lexicographic relative path, then source order.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ast::{AstNode, FilterRuleSet, NodeKind};
use super::events::{linearize, TokenEvent};
use super::scope::resolve_variables;
use super::{parse_java, SyntaxError};

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionEvents {
    pub id: String,
    pub events: Vec<TokenEvent>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestSummary {
    pub files_parsed: usize,
    pub files_skipped: Vec<SkippedFile>,
    pub functions: usize,
    pub events: usize,
}

/// Extract the function sequences of one source file. Methods nested inside
/// other methods (via anonymous classes) stay part of the enclosing
/// function's sequence.
pub fn ingest_source(
    relpath: &str,
    source: &str,
    rules: &FilterRuleSet,
) -> Result<Vec<FunctionEvents>, SyntaxError> {
    let mut root = parse_java(source)?;
    resolve_variables(&mut root);
    let mut methods = Vec::new();
    collect_methods(&root, &mut methods);
    Ok(methods
        .into_iter()
        .enumerate()
        .map(|(ordinal, method)| {
            let name = method
                .children
                .iter()
                .find(|c| c.kind == NodeKind::SimpleName)
                .and_then(|c| c.content.as_deref())
                .unwrap_or("?");
            let id = format!("{relpath}#{ordinal}:{name}");
            let events = linearize(method, rules, &id);
            FunctionEvents { id, events }
        })
        .collect())
}

fn collect_methods<'a>(node: &'a AstNode, out: &mut Vec<&'a AstNode>) {
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

/// Walk `dir` recursively for `.java` files and ingest each. Unparseable or
/// non-UTF-8 files are skipped with a reason.
pub fn ingest_dir(
    dir: &Path,
    rules: &FilterRuleSet,
) -> io::Result<(Vec<FunctionEvents>, IngestSummary)> {
    let mut paths = Vec::new();
    collect_java_files(dir, &mut paths)?;
    let mut rels: Vec<(String, PathBuf)> = paths
        .into_iter()
        .map(|p| {
            let rel = p
                .strip_prefix(dir)
                .unwrap_or(&p)
                .to_string_lossy()
                .replace('\\', "/");
            (rel, p)
        })
        .collect();
    rels.sort_by(|a, b| a.0.cmp(&b.0));

    let mut functions = Vec::new();
    let mut summary = IngestSummary {
        files_parsed: 0,
        files_skipped: Vec::new(),
        functions: 0,
        events: 0,
    };
    for (rel, path) in rels {
        let bytes = fs::read(&path)?;
        let source = match String::from_utf8(bytes) {
            Ok(s) => s,
            Err(_) => {
                summary.files_skipped.push(SkippedFile {
                    path: rel,
                    reason: "invalid UTF-8".to_string(),
                });
                continue;
            }
        };
        match ingest_source(&rel, &source, rules) {
            Ok(mut fns) => {
                summary.files_parsed += 1;
                summary.functions += fns.len();
                summary.events += fns.iter().map(|f| f.events.len()).sum::<usize>();
                functions.append(&mut fns);
            }
            Err(err) => {
                summary.files_skipped.push(SkippedFile { path: rel, reason: err.to_string() });
            }
        }
    }
    Ok((functions, summary))
}

fn collect_java_files(dir: &Path, out: &mut Vec<PathBuf>) -> io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if path.is_dir() {
            collect_java_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "java") {
            out.push(path);
        }
    }
    Ok(())
}

/// Regroup a flat event stream (e.g. read back from JSONL) by function id,
/// preserving first-appearance order.
pub fn group_events(events: Vec<TokenEvent>) -> Vec<FunctionEvents> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut out: Vec<FunctionEvents> = Vec::new();
    for event in events {
        let slot = match index.get(&event.function) {
            Some(&i) => i,
            None => {
                index.insert(event.function.clone(), out.len());
                out.push(FunctionEvents { id: event.function.clone(), events: Vec::new() });
                out.len() - 1
            }
        };
        out[slot].events.push(event);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = r#"
        class Counter {
            private int total;

            public void add(int amount) {
                total = total + amount;
            }

            public int total() {
                return total;
            }

            public abstract void skipped(int x);
        }
    "#;

    #[test]
    fn top_level_methods_become_functions() {
        let rules = FilterRuleSet::standard();
        let fns = ingest_source("Counter.java", SRC, &rules).unwrap();
        assert_eq!(fns.len(), 2);
        assert_eq!(fns[0].id, "Counter.java#0:add");
        assert_eq!(fns[1].id, "Counter.java#1:total");
        assert!(fns[0].events.iter().all(|e| e.function == fns[0].id));
    }

    #[test]
    fn anonymous_class_methods_stay_in_enclosing_sequence() {
        let src = r#"
            class C {
                Runnable make(int x) {
                    return new Runnable() {
                        public void run() { use(x); }
                    };
                }
            }
        "#;
        let fns = ingest_source("C.java", src, &FilterRuleSet::standard()).unwrap();
        assert_eq!(fns.len(), 1);
        assert!(fns[0].events.iter().any(|e| e.text == "run"));
    }

    #[test]
    fn determinism_same_source_same_events() {
        let rules = FilterRuleSet::standard();
        let a = ingest_source("X.java", SRC, &rules).unwrap();
        let b = ingest_source("X.java", SRC, &rules).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn group_events_round_trips_function_structure() {
        let rules = FilterRuleSet::standard();
        let fns = ingest_source("Counter.java", SRC, &rules).unwrap();
        let flat: Vec<TokenEvent> =
            fns.iter().flat_map(|f| f.events.iter().cloned()).collect();
        let grouped = group_events(flat);
        assert_eq!(grouped, fns);
    }
}
