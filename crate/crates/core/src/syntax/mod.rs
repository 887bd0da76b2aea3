//! Java ingestion: parsing, AST linearization into token events, cared-node
//! classification, lexical variable resolution and repetition statistics.

pub mod ast;
mod events;
mod ingest;
pub mod lexer;
pub mod parser;
mod scope;
mod stats;

pub use ast::{classify, AstNode, ExtraCondition, FilterRule, FilterRuleSet, NodeClass, NodeKind, Role, Span};
pub use events::{linearize, read_events_jsonl, write_events_jsonl, TokenEvent};
pub use ingest::{group_events, ingest_dir, ingest_source, FunctionEvents, IngestSummary, SkippedFile};
pub use scope::resolve_variables;
pub use stats::{repetition_stats, BucketStats, ClassAggregate, RepetitionStats};

use lexer::line_col;
use parser::Parser;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SyntaxError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unsupported construct at {line}:{col}: {what}")]
    Unsupported { line: usize, col: usize, what: String },
}

impl SyntaxError {
    pub fn syntax(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, col) = line_col(src, offset);
        SyntaxError::Syntax { line, col, message: message.into() }
    }

    pub fn unsupported(src: &str, offset: usize, what: impl Into<String>) -> Self {
        let (line, col) = line_col(src, offset);
        SyntaxError::Unsupported { line, col, what: what.into() }
    }
}

/// Parse Java source: a compilation unit, or a bare method body (statement
/// sequence), which is wrapped in a synthetic method declaration.
pub fn parse_java(source: &str) -> Result<AstNode, SyntaxError> {
    match Parser::new(source)?.parse_compilation_unit() {
        Ok(unit) => Ok(unit),
        Err(unit_err) => match Parser::new(source)?.parse_method_body_snippet() {
            Ok(unit) => Ok(unit),
            Err(_) => Err(unit_err),
        },
    }
}
