//! Lexical variable resolution. A `SimpleName` is marked as a variable when
//! it declares or resolves to a formal parameter, local, for/enhanced-for
//! variable, catch parameter, lambda parameter, or a field declared in an
//! enclosing type in the same file. Scoping is positional inside blocks and
//! respects shadowing; there is no cross-file or inheritance resolution.

use std::collections::HashSet;

use super::ast::{AstNode, NodeKind, Role};

pub fn resolve_variables(root: &mut AstNode) {
    let mut resolver = Resolver { scopes: vec![HashSet::new()] };
    resolver.visit(root);
}

struct Resolver {
    scopes: Vec<HashSet<String>>,
}

impl Resolver {
    fn push(&mut self) {
        self.scopes.push(HashSet::new());
    }

    fn pop(&mut self) {
        self.scopes.pop();
    }

    fn declare(&mut self, name: &str) {
        self.scopes.last_mut().expect("scope stack nonempty").insert(name.to_string());
    }

    fn visible(&self, name: &str) -> bool {
        self.scopes.iter().rev().any(|s| s.contains(name))
    }

    fn visit(&mut self, node: &mut AstNode) {
        use NodeKind::*;
        match node.kind {
            TypeDeclaration | EnumDeclaration | AnnotationTypeDeclaration
            | AnonymousClassDeclaration => {
                self.push();
                // fields are visible throughout the type body regardless of
                // declaration order
                for member in &node.children {
                    match member.kind {
                        FieldDeclaration => {
                            for frag in &member.children {
                                if frag.kind == VariableDeclarationFragment {
                                    if let Some(name) = fragment_name(frag) {
                                        self.declare(&name);
                                    }
                                }
                            }
                        }
                        EnumConstantDeclaration => {
                            if let Some(name) =
                                member.children.first().and_then(|n| n.content.clone())
                            {
                                self.declare(&name);
                            }
                        }
                        _ => {}
                    }
                }
                self.visit_children(node);
                self.pop();
            }
            MethodDeclaration | Initializer | Block | ForStatement | EnhancedForStatement
            | TryStatement | CatchClause | SwitchStatement | LambdaExpression => {
                self.push();
                self.visit_children(node);
                self.pop();
            }
            FieldDeclaration => {
                // field names were pre-declared by the enclosing type; still
                // mark declarators and walk initializers
                self.visit_children(node);
            }
            VariableDeclarationStatement | VariableDeclarationExpression => {
                self.visit_children(node);
            }
            VariableDeclarationFragment => {
                if let Some(name_node) = node.children.first_mut() {
                    if name_node.kind == SimpleName {
                        let name = name_node.content.clone().unwrap_or_default();
                        self.declare(&name);
                        name_node.is_variable = true;
                    }
                }
                for child in node.children.iter_mut().skip(1) {
                    self.visit(child);
                }
            }
            SingleVariableDeclaration => {
                // children: modifiers*, type, name — the name is last
                let last = node.children.len().saturating_sub(1);
                for (i, child) in node.children.iter_mut().enumerate() {
                    if i == last && child.kind == SimpleName {
                        let name = child.content.clone().unwrap_or_default();
                        self.declare(&name);
                        child.is_variable = true;
                    } else {
                        self.visit(child);
                    }
                }
            }
            _ => {
                self.visit_children(node);
            }
        }
    }

    fn visit_children(&mut self, node: &mut AstNode) {
        let parent_kind = node.kind;
        let receiver_is_this = node
            .children
            .first()
            .is_some_and(|c| c.kind == NodeKind::ThisExpression && c.children.is_empty());
        for idx in 0..node.children.len() {
            let child = &mut node.children[idx];
            if child.kind == NodeKind::SimpleName {
                if usage_position(parent_kind, child.role, idx, receiver_is_this) {
                    if let Some(name) = child.content.as_deref() {
                        if self.visible(name) {
                            child.is_variable = true;
                        }
                    }
                }
            } else {
                self.visit(child);
            }
        }
    }
}

fn fragment_name(frag: &AstNode) -> Option<String> {
    frag.children
        .first()
        .filter(|n| n.kind == NodeKind::SimpleName)
        .and_then(|n| n.content.clone())
}

/// Is a direct `SimpleName` child of `parent_kind` an expression usage?
/// Method names, labels, type names and qualified-name segments are not.
fn usage_position(parent: NodeKind, role: Role, idx: usize, receiver_is_this: bool) -> bool {
    use NodeKind::*;
    match parent {
        ExpressionStatement | ParenthesizedExpression | ReturnStatement | ThrowStatement
        | SynchronizedStatement | AssertStatement | ArrayAccess | ArrayInitializer
        | InfixExpression | PrefixExpression | PostfixExpression | ConditionalExpression
        | Assignment | IfStatement | WhileStatement | DoStatement | ForStatement
        | EnhancedForStatement | SwitchStatement | ArrayCreation | CastExpression
        | InstanceofExpression | LambdaExpression | ConstructorInvocation => true,
        MethodInvocation | SuperMethodInvocation | SuperConstructorInvocation => {
            role == Role::Receiver || role == Role::Argument
        }
        ClassInstanceCreation => role == Role::Argument,
        // `this.x` resolves against fields of the enclosing type
        FieldAccess => idx == 1 && receiver_is_this,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_java;

    /// Collect (text, is_variable) for every SimpleName leaf in pre-order.
    fn marks(src: &str) -> Vec<(String, bool)> {
        let mut root = parse_java(src).unwrap();
        resolve_variables(&mut root);
        let mut out = Vec::new();
        root.walk(&mut |node, _| {
            if node.kind == NodeKind::SimpleName {
                out.push((node.content.clone().unwrap_or_default(), node.is_variable));
            }
        });
        out
    }

    #[test]
    fn same_block_use_is_variable() {
        let m = marks("int x; x = 1;");
        assert_eq!(m, vec![("x".to_string(), true), ("x".to_string(), true)]);
    }

    #[test]
    fn out_of_scope_use_is_not_variable() {
        let m = marks("{ int x; } x.foo();");
        // declaration, then receiver use after the block closed
        assert_eq!(m[0], ("x".to_string(), true));
        assert_eq!(m[1], ("x".to_string(), false));
        assert_eq!(m[2], ("foo".to_string(), false));
    }

    #[test]
    fn method_names_are_never_variables() {
        let m = marks("int foo; x.foo();");
        let use_foo = m.iter().filter(|(t, _)| t == "foo").collect::<Vec<_>>();
        assert_eq!(use_foo[0].1, true); // the declaration fragment itself
        assert_eq!(use_foo[1].1, false); // the invoked method name
    }

    #[test]
    fn declaration_order_matters_within_block() {
        let m = marks("y = 1; int y;");
        assert_eq!(m[0], ("y".to_string(), false));
        assert_eq!(m[1], ("y".to_string(), true));
    }

    #[test]
    fn fields_are_visible_before_their_declaration() {
        let src = r#"
            class C {
                void f() { total += 1; }
                int total;
            }
        "#;
        let m = marks(src);
        let total_use = m.iter().find(|(t, v)| t == "total" && *v);
        assert!(total_use.is_some());
        assert!(m.iter().filter(|(t, _)| t == "total").all(|(_, v)| *v));
    }

    #[test]
    fn params_catch_lambda_and_for_variables_resolve() {
        let src = r#"
            class C {
                void f(int a) {
                    for (int i = 0; i < a; i++) { use(i); }
                    for (String s : names) { use(s); }
                    try { } catch (Exception e) { use(e); }
                    consume(v -> use(v));
                }
            }
        "#;
        let m = marks(src);
        for var in ["a", "i", "s", "e", "v"] {
            assert!(
                m.iter().filter(|(t, _)| t == var).all(|(_, is_var)| *is_var),
                "{var} should always be a variable: {m:?}"
            );
        }
        assert!(m.iter().filter(|(t, _)| t == "use").all(|(_, v)| !v));
        assert!(m.iter().any(|(t, v)| t == "names" && !v));
    }

    #[test]
    fn this_field_access_resolves_but_foreign_access_does_not() {
        let src = r#"
            class C {
                int size;
                void f(C other) {
                    this.size = other.size + size;
                }
            }
        "#;
        let m = marks(src);
        let sizes: Vec<bool> = m.iter().filter(|(t, _)| t == "size").map(|(_, v)| *v).collect();
        // declaration, this.size, other.size (FieldAccess on non-this), bare use
        assert_eq!(sizes, vec![true, true, false, true]);
    }

    #[test]
    fn shadowing_innermost_wins() {
        let src = r#"
            class C {
                int x;
                void f() {
                    use(x);
                    { int x = 0; use(x); }
                    use(x);
                }
            }
        "#;
        let m = marks(src);
        assert!(m.iter().filter(|(t, _)| t == "x").all(|(_, v)| *v));
    }
}
