//! Property suites for the spec-level invariants: softmax stability,
//! argmax monotonicity, mixture mass, window extraction, scope shadowing
//! and the linearization length law.

use proptest::prelude::*;

use tokrep::config::HeadMode;
use tokrep::corpus::{context_window, Vocabulary};
use tokrep::model::{mix_distributions, rep_argmax, ContextStates, RepHeadSet, TokenRef};
use tokrep::numeric::{stable_softmax, ParamStore};
use tokrep::syntax::{
    linearize, parse_java, resolve_variables, AstNode, FilterRuleSet, FunctionEvents, NodeClass,
    NodeKind, Span, TokenEvent,
};

fn event(pos: usize, text: String, class: NodeClass, var: bool) -> TokenEvent {
    TokenEvent {
        function: "f".into(),
        pos,
        text,
        content: class != NodeClass::NotSimpleName,
        class,
        var,
        parent: "Assignment".into(),
    }
}

prop_compose! {
    fn arb_events(max_len: usize)
        (specs in prop::collection::vec((0..3usize, 0..6usize), 1..max_len))
        -> Vec<TokenEvent>
    {
        specs.into_iter().enumerate().map(|(pos, (class, text))| {
            let class = match class {
                0 => NodeClass::NotSimpleName,
                1 => NodeClass::FilteredSimpleName,
                _ => NodeClass::Cared,
            };
            event(pos, format!("t{text}"), class, class == NodeClass::Cared)
        }).collect()
    }
}

proptest! {
    #[test]
    fn softmax_shift_invariance(
        logits in prop::collection::vec(-30.0f64..30.0, 1..12),
        shift in -500.0f64..500.0,
    ) {
        let shifted: Vec<f64> = logits.iter().map(|x| x + shift).collect();
        let a = stable_softmax(&logits);
        let b = stable_softmax(&shifted);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn argmax_invariant_under_monotone_transforms(
        scores in prop::collection::vec(-5.0f64..5.0, 1..10),
        scale in 0.1f64..10.0,
        offset in -100.0f64..100.0,
    ) {
        let base = rep_argmax(&scores);
        let affine: Vec<f64> = scores.iter().map(|s| s * scale + offset).collect();
        let exped: Vec<f64> = scores.iter().map(|s| s.exp()).collect();
        prop_assert_eq!(rep_argmax(&affine), base);
        prop_assert_eq!(rep_argmax(&exped), base);
    }

    #[test]
    fn mixture_mass_and_context_presence(
        lm_raw in prop::collection::vec(0.01f64..1.0, 4..4usize.saturating_add(1)),
        ptr_raw in prop::collection::vec(0.01f64..1.0, 1..6),
        p_rep in 0.001f64..1.0,
        ctx_picks in prop::collection::vec(0..5usize, 1..6),
    ) {
        prop_assume!(ptr_raw.len() == ctx_picks.len());
        let vocab_fns = vec![FunctionEvents {
            id: "v".into(),
            events: ["a", "b", "c", "pad"].iter().enumerate().map(|(i, t)| {
                event(i, (*t).to_string(), NodeClass::NotSimpleName, false)
            }).chain(std::iter::once(
                event(4, "a".to_string(), NodeClass::NotSimpleName, false),
            )).chain(std::iter::once(
                event(5, "b".to_string(), NodeClass::NotSimpleName, false),
            )).chain(std::iter::once(
                event(6, "c".to_string(), NodeClass::NotSimpleName, false),
            )).collect(),
        }];
        let vocab = Vocabulary::build(&vocab_fns, 1).unwrap();
        let mut lm: Vec<f64> = (0..vocab.len()).map(|i| lm_raw[i % lm_raw.len()]).collect();
        let mass: f64 = lm.iter().sum();
        lm.iter_mut().for_each(|p| *p /= mass);

        let ptr_mass: f64 = ptr_raw.iter().sum();
        let pointer: Vec<f64> = ptr_raw.iter().map(|p| p / ptr_mass).collect();
        let names = ["a", "b", "unseen1", "unseen2", "unseen3"];
        let ctx_tokens: Vec<&str> = ctx_picks.iter().map(|&i| names[i]).collect();

        let mix = mix_distributions(&lm, &vocab, &pointer, p_rep, &ctx_tokens);
        let total: f64 = mix.iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "mass {}", total);
        for text in &ctx_tokens {
            prop_assert!(mix.iter().any(|(t, p)| t == text && *p > 0.0),
                "context string `{}` missing from candidates", text);
        }
        // sorted descending
        for w in mix.windows(2) {
            prop_assert!(w[0].1 >= w[1].1);
        }
    }

    #[test]
    fn context_window_matches_slice_filter_oracle(
        events in arb_events(40),
        pos_frac in 0.0f64..1.0,
        m in 1usize..30,
    ) {
        let pos = ((events.len() as f64) * pos_frac) as usize;
        let pos = pos.min(events.len().saturating_sub(1));
        let window = context_window(&events, pos, m);

        // independent oracle: direct slice and filter
        let lo = pos.saturating_sub(m);
        let expected: Vec<usize> = (lo..pos)
            .filter(|&i| events[i].class == NodeClass::Cared)
            .collect();
        prop_assert_eq!(&window.positions, &expected);

        // invariants: strictly increasing, in range, cared
        for w in window.positions.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for &p in &window.positions {
            prop_assert!(p < pos && pos - p <= m);
            prop_assert_eq!(events[p].class, NodeClass::Cared);
        }
        prop_assert!(window.positions.len() <= m);
    }
}

// ---- scope shadowing over generated nested blocks ------------------------

#[derive(Debug, Clone)]
enum BlockItem {
    Declare(u8),
    Use(u8),
    Nested(Vec<BlockItem>),
}

fn arb_block() -> impl Strategy<Value = Vec<BlockItem>> {
    let leaf = prop_oneof![
        (0..2u8).prop_map(BlockItem::Declare),
        (0..2u8).prop_map(BlockItem::Use),
    ];
    leaf.prop_recursive(3, 24, 5, |inner| {
        prop::collection::vec(
            prop_oneof![
                (0..2u8).prop_map(BlockItem::Declare),
                (0..2u8).prop_map(BlockItem::Use),
                prop::collection::vec(inner, 0..4).prop_map(BlockItem::Nested),
            ],
            0..5,
        )
    })
    .prop_map(|items| match items {
        BlockItem::Nested(v) => v,
        other => vec![other],
    })
}

fn var_name(v: u8) -> &'static str {
    if v == 0 {
        "alpha"
    } else {
        "beta"
    }
}

fn render_block(items: &[BlockItem], out: &mut String) {
    for item in items {
        match item {
            // a redeclaration in the same scope is not legal Java, but the
            // lexical resolver is defined over arbitrary nesting
            BlockItem::Declare(v) => out.push_str(&format!("int {};\n", var_name(*v))),
            BlockItem::Use(v) => out.push_str(&format!("{} = 1;\n", var_name(*v))),
            BlockItem::Nested(inner) => {
                out.push_str("{\n");
                render_block(inner, out);
                out.push_str("}\n");
            }
        }
    }
}

/// Independent oracle: walk the generated structure with an explicit scope
/// stack, producing (name, is_variable) in source order.
fn oracle_marks(items: &[BlockItem], scopes: &mut Vec<[bool; 2]>, out: &mut Vec<(String, bool)>) {
    for item in items {
        match item {
            BlockItem::Declare(v) => {
                scopes.last_mut().unwrap()[*v as usize] = true;
                out.push((var_name(*v).to_string(), true));
            }
            BlockItem::Use(v) => {
                let visible = scopes.iter().any(|frame| frame[*v as usize]);
                out.push((var_name(*v).to_string(), visible));
            }
            BlockItem::Nested(inner) => {
                scopes.push([false; 2]);
                oracle_marks(inner, scopes, out);
                scopes.pop();
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn shadowing_innermost_declaration_wins(items in arb_block()) {
        let mut source = String::new();
        render_block(&items, &mut source);
        let mut root = parse_java(&source).unwrap();
        resolve_variables(&mut root);

        let mut got = Vec::new();
        collect_name_marks(&root, &mut got);

        let mut expected = Vec::new();
        oracle_marks(&items, &mut vec![[false; 2]], &mut expected);

        prop_assert_eq!(got, expected, "source:\n{}", source);
    }
}

fn collect_name_marks(node: &AstNode, out: &mut Vec<(String, bool)>) {
    if node.kind == NodeKind::SimpleName {
        let text = node.content.clone().unwrap_or_default();
        if text == "alpha" || text == "beta" {
            out.push((text, node.is_variable));
        }
    }
    for child in &node.children {
        collect_name_marks(child, out);
    }
}

// ---- linearization length law over generated trees -----------------------

fn arb_ast() -> impl Strategy<Value = AstNode> {
    let leaf = prop_oneof![
        Just(NodeKind::SimpleName),
        Just(NodeKind::NumberLiteral),
        Just(NodeKind::StringLiteral),
    ]
    .prop_map(|kind| AstNode::leaf(kind, "x", Span::default()));
    leaf.prop_recursive(4, 32, 4, |inner| {
        (
            prop_oneof![
                Just(NodeKind::Block),
                Just(NodeKind::ExpressionStatement),
                Just(NodeKind::InfixExpression),
                Just(NodeKind::MethodInvocation),
            ],
            prop::collection::vec(inner, 0..4),
        )
            .prop_map(|(kind, children)| {
                let mut node = AstNode::new(kind, Span::default());
                for child in children {
                    node.push(child);
                }
                node
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    #[test]
    fn linearize_length_law(root in arb_ast()) {
        let events = linearize(&root, &FilterRuleSet::standard(), "f");
        let leaves = root.count_leaves();
        let internal = root.count_nodes() - leaves;
        prop_assert_eq!(events.len(), internal + 2 * leaves);
        for (i, e) in events.iter().enumerate() {
            prop_assert_eq!(e.pos, i);
        }
        // filter soundness: cared events only from SimpleName content
        for e in &events {
            if e.class != NodeClass::NotSimpleName {
                prop_assert!(e.content);
            }
            if e.var {
                prop_assert_eq!(e.class, NodeClass::Cared);
            }
        }
    }
}

// ---- pointer distribution shift invariance at the head level -------------

#[test]
fn pointer_probs_equal_softmax_of_shifted_scores() {
    let heads = RepHeadSet::new(HeadMode::Single, 4).unwrap();
    let mut store = ParamStore::new();
    heads.register(&mut store);
    for (i, v) in store.get_mut("rep.all.w").values.iter_mut().enumerate() {
        *v = ((i as f64) * 0.17).sin() * 0.3;
    }
    let ctx = ContextStates {
        states: vec![
            vec![0.4, -0.2, 0.8, 0.1],
            vec![-0.6, 0.3, 0.2, 0.9],
            vec![0.05, 0.6, -0.4, 0.3],
        ],
        h_next: vec![0.7, -0.1, 0.25, -0.8],
        token_refs: (0..3)
            .map(|i| TokenRef {
                text: format!("t{i}"),
                position: i,
                is_variable: true,
                parent_kind: "Assignment".into(),
            })
            .collect(),
    };
    let probs = heads.pointer_probs(&store, &ctx, "all");

    // recompute scores directly, shift them, and softmax: must agree
    let w = store.get("rep.all.w");
    let scores: Vec<f64> = ctx
        .states
        .iter()
        .map(|h| {
            let mut s = 0.0;
            for r in 0..4 {
                for c in 0..4 {
                    s += h[r] * w.values[r * 4 + c] * ctx.h_next[c];
                }
            }
            s + 1234.5
        })
        .collect();
    let shifted = stable_softmax(&scores);
    for (a, b) in probs.iter().zip(&shifted) {
        assert!((a - b).abs() < 1e-12);
    }
}
