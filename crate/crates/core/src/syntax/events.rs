//! Token events: the linearized form of an AST. Every node emits its kind
//! as a type token; leaves additionally emit their text as a content token.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::ast::{classify, AstNode, FilterRuleSet, NodeClass};

/// One linearized token. `class` is only ever `filtered`/`cared` on the
/// content token of a `SimpleName` leaf; `var` implies `class == cared`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenEvent {
    #[serde(rename = "fn")]
    pub function: String,
    pub pos: usize,
    pub text: String,
    pub content: bool,
    pub class: NodeClass,
    pub var: bool,
    /// Kind name of the emitting node's parent (empty at the sequence root).
    pub parent: String,
}

/// Pre-order linearization: one type token per node, plus a content token
/// per leaf, so `len == internal_nodes + 2 * leaves`.
pub fn linearize(root: &AstNode, rules: &FilterRuleSet, function_id: &str) -> Vec<TokenEvent> {
    let mut events = Vec::new();
    root.walk(&mut |node, parent| {
        let parent_kind = parent.map_or_else(String::new, |p| p.kind.name().to_string());
        events.push(TokenEvent {
            function: function_id.to_string(),
            pos: 0,
            text: node.kind.name().to_string(),
            content: false,
            class: NodeClass::NotSimpleName,
            var: false,
            parent: parent_kind.clone(),
        });
        if node.is_leaf() {
            let class = classify(node, parent, rules);
            events.push(TokenEvent {
                function: function_id.to_string(),
                pos: 0,
                text: node.content.clone().expect("leaf content"),
                content: true,
                class,
                var: node.is_variable && class == NodeClass::Cared,
                parent: parent_kind,
            });
        }
    });
    for (pos, event) in events.iter_mut().enumerate() {
        event.pos = pos;
    }
    events
}

pub fn write_events_jsonl<W: Write>(mut w: W, events: &[TokenEvent]) -> io::Result<()> {
    for event in events {
        serde_json::to_writer(&mut w, event)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_events_jsonl<R: BufRead>(r: R) -> io::Result<Vec<TokenEvent>> {
    let mut events = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event: TokenEvent = serde_json::from_str(&line)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        events.push(event);
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::{NodeKind, Span};
    use crate::syntax::parse_java;

    #[test]
    fn leaf_emits_type_then_content() {
        let leaf = AstNode::leaf(NodeKind::SimpleName, "x", Span::default());
        let events = linearize(&leaf, &FilterRuleSet::standard(), "f");
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].text, "SimpleName");
        assert!(!events[0].content);
        assert_eq!(events[1].text, "x");
        assert!(events[1].content);
    }

    #[test]
    fn childless_internal_node_emits_single_type_token() {
        let block = AstNode::new(NodeKind::Block, Span::default());
        let events = linearize(&block, &FilterRuleSet::standard(), "f");
        assert_eq!(events.len(), 1);
        assert!(!events[0].content);
    }

    #[test]
    fn length_law_on_hand_built_ast() {
        // brute-force oracle: count internals and leaves over a known tree
        let mut root = AstNode::new(NodeKind::Block, Span::default());
        let mut stmt = AstNode::new(NodeKind::ExpressionStatement, Span::default());
        let mut infix = AstNode::new(NodeKind::InfixExpression, Span::default());
        infix.push(AstNode::leaf(NodeKind::SimpleName, "a", Span::default()));
        infix.push(AstNode::leaf(NodeKind::SimpleName, "b", Span::default()));
        stmt.push(infix);
        root.push(stmt);
        let mut extra = AstNode::new(NodeKind::ReturnStatement, Span::default());
        extra.push(AstNode::leaf(NodeKind::NumberLiteral, "1", Span::default()));
        root.push(extra);

        let leaves = root.count_leaves();
        let internal = root.count_nodes() - leaves;
        assert_eq!(leaves, 3);
        assert_eq!(internal, 4);
        let events = linearize(&root, &FilterRuleSet::standard(), "f");
        assert_eq!(events.len(), internal + 2 * leaves);
    }

    #[test]
    fn positions_are_consecutive_from_zero() {
        let root = parse_java("int a = b + c;").unwrap();
        let events = linearize(&root, &FilterRuleSet::standard(), "f");
        for (i, e) in events.iter().enumerate() {
            assert_eq!(e.pos, i);
        }
        assert_eq!(
            events.len(),
            (root.count_nodes() - root.count_leaves()) + 2 * root.count_leaves()
        );
    }

    #[test]
    fn jsonl_round_trip_preserves_events() {
        let root = parse_java("int a = b + c; a = a * 2;").unwrap();
        let events = linearize(&root, &FilterRuleSet::standard(), "file.java#0:snippet");
        let mut buf = Vec::new();
        write_events_jsonl(&mut buf, &events).unwrap();
        let back = read_events_jsonl(buf.as_slice()).unwrap();
        assert_eq!(events, back);
    }

    #[test]
    fn wire_format_field_names_are_stable() {
        let event = TokenEvent {
            function: "f".into(),
            pos: 3,
            text: "x".into(),
            content: true,
            class: NodeClass::Cared,
            var: true,
            parent: "Assignment".into(),
        };
        let line = serde_json::to_string(&event).unwrap();
        assert_eq!(
            line,
            r#"{"fn":"f","pos":3,"text":"x","content":true,"class":"cared","var":true,"parent":"Assignment"}"#
        );
    }
}
