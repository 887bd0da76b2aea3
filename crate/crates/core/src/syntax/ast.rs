//! AST node model, cared-node filter rules and classification.
//!
//! Node kinds mirror the Eclipse-JDT-style naming that the filter table is
//! written against; anything the parser does not model precisely maps to
//! [`NodeKind::Unknown`].

use serde::{Deserialize, Serialize};

/// Byte-offset range into the original source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

macro_rules! node_kinds {
    ($($variant:ident),+ $(,)?) => {
        /// AST node kind. Covers every parent kind named in the filter table
        /// plus the constructs the parser models; `Unknown` is the catch-all.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum NodeKind {
            $($variant),+
        }

        impl NodeKind {
            pub const ALL: &'static [NodeKind] = &[$(NodeKind::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $(NodeKind::$variant => stringify!($variant)),+
                }
            }

            pub fn from_name(name: &str) -> Option<NodeKind> {
                match name {
                    $(stringify!($variant) => Some(NodeKind::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

node_kinds! {
    // Names and types
    SimpleName,
    QualifiedName,
    SimpleType,
    QualifiedType,
    ParameterizedType,
    ArrayType,
    PrimitiveType,
    WildcardType,
    UnionType,
    TypeParameter,
    // Annotations
    MarkerAnnotation,
    NormalAnnotation,
    SingleMemberAnnotation,
    MemberValuePair,
    // Declarations
    CompilationUnit,
    PackageDeclaration,
    ImportDeclaration,
    TypeDeclaration,
    EnumDeclaration,
    EnumConstantDeclaration,
    AnnotationTypeDeclaration,
    AnonymousClassDeclaration,
    MethodDeclaration,
    FieldDeclaration,
    Initializer,
    SingleVariableDeclaration,
    VariableDeclarationStatement,
    VariableDeclarationExpression,
    VariableDeclarationFragment,
    Modifier,
    // Statements
    Block,
    ExpressionStatement,
    IfStatement,
    WhileStatement,
    DoStatement,
    ForStatement,
    EnhancedForStatement,
    SwitchStatement,
    SwitchCase,
    BreakStatement,
    ContinueStatement,
    ReturnStatement,
    ThrowStatement,
    TryStatement,
    CatchClause,
    LabeledStatement,
    SynchronizedStatement,
    AssertStatement,
    EmptyStatement,
    ConstructorInvocation,
    SuperConstructorInvocation,
    // Expressions
    Assignment,
    InfixExpression,
    PrefixExpression,
    PostfixExpression,
    ConditionalExpression,
    CastExpression,
    InstanceofExpression,
    ParenthesizedExpression,
    MethodInvocation,
    SuperMethodInvocation,
    ClassInstanceCreation,
    FieldAccess,
    SuperFieldAccess,
    ArrayAccess,
    ArrayCreation,
    ArrayInitializer,
    ThisExpression,
    NumberLiteral,
    StringLiteral,
    CharacterLiteral,
    BooleanLiteral,
    NullLiteral,
    TypeLiteral,
    LambdaExpression,
    ExpressionMethodReference,
    CreationReference,
    Unknown,
}

/// Role a node plays in its parent. Only the roles the filter rules consult
/// are distinguished; everything else is `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Role {
    #[default]
    Other,
    /// Name of the invoked method in a (super) method invocation.
    MethodName,
    /// Class qualifier of a super constructor/method invocation.
    SuperClass,
    /// Receiver expression of a method invocation.
    Receiver,
    /// Argument of an invocation.
    Argument,
    /// Explicit type argument of an invocation.
    TypeArgument,
}

#[derive(Debug, Clone)]
pub struct AstNode {
    pub kind: NodeKind,
    pub role: Role,
    /// Token text for leaves (identifiers, literals, modifiers, primitives).
    pub content: Option<String>,
    pub children: Vec<AstNode>,
    pub span: Span,
    /// Set by the variable resolver on `SimpleName` leaves.
    pub is_variable: bool,
}

impl AstNode {
    pub fn new(kind: NodeKind, span: Span) -> Self {
        AstNode {
            kind,
            role: Role::Other,
            content: None,
            children: Vec::new(),
            span,
            is_variable: false,
        }
    }

    pub fn leaf(kind: NodeKind, content: impl Into<String>, span: Span) -> Self {
        AstNode {
            kind,
            role: Role::Other,
            content: Some(content.into()),
            children: Vec::new(),
            span,
            is_variable: false,
        }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn push(&mut self, child: AstNode) {
        self.children.push(child);
    }

    pub fn push_with_role(&mut self, mut child: AstNode, role: Role) {
        child.role = role;
        self.children.push(child);
    }

    /// A leaf emits a type token and a content token when linearized.
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty() && self.content.is_some()
    }

    /// Pre-order traversal calling `f(node, parent)`.
    pub fn walk<'a, F: FnMut(&'a AstNode, Option<&'a AstNode>)>(&'a self, f: &mut F) {
        fn go<'a, F: FnMut(&'a AstNode, Option<&'a AstNode>)>(
            node: &'a AstNode,
            parent: Option<&'a AstNode>,
            f: &mut F,
        ) {
            f(node, parent);
            for child in &node.children {
                go(child, Some(node), f);
            }
        }
        go(self, None, f);
    }

    pub fn count_nodes(&self) -> usize {
        1 + self.children.iter().map(AstNode::count_nodes).sum::<usize>()
    }

    pub fn count_leaves(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(AstNode::count_leaves).sum()
        }
    }
}

/// Classification of a token event's originating node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum NodeClass {
    /// Not the content of a `SimpleName` leaf.
    #[serde(rename = "not-sn")]
    NotSimpleName,
    /// `SimpleName` content excluded by the filter table.
    #[serde(rename = "filtered")]
    FilteredSimpleName,
    /// `SimpleName` content that survives the filter.
    #[serde(rename = "cared")]
    Cared,
}

impl NodeClass {
    pub fn name(self) -> &'static str {
        match self {
            NodeClass::NotSimpleName => "not-sn",
            NodeClass::FilteredSimpleName => "filtered",
            NodeClass::Cared => "cared",
        }
    }
}

/// Extra condition attached to a filter rule row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraCondition {
    /// Row applies to every `SimpleName` child of the parent kind.
    None,
    /// Row applies only when the node is the invoked method's name.
    IsMethodName,
    /// Row applies only when the node names the super class qualifier.
    IsSuperClass,
    IsMethodNameOrSuperClass,
}

impl ExtraCondition {
    fn holds(self, role: Role) -> bool {
        match self {
            ExtraCondition::None => true,
            ExtraCondition::IsMethodName => role == Role::MethodName,
            ExtraCondition::IsSuperClass => role == Role::SuperClass,
            ExtraCondition::IsMethodNameOrSuperClass => {
                role == Role::MethodName || role == Role::SuperClass
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterRule {
    pub parent: NodeKind,
    pub condition: ExtraCondition,
}

/// The 16-row exclusion table deciding which `SimpleName` nodes are
/// unlikely to be repeated. Membership queries consult only the parent kind
/// and the node's role in that parent.
#[derive(Debug, Clone)]
pub struct FilterRuleSet {
    rules: Vec<FilterRule>,
}

impl FilterRuleSet {
    pub fn standard() -> Self {
        use ExtraCondition::*;
        use NodeKind::*;
        let rules = vec![
            FilterRule { parent: ContinueStatement, condition: None },
            FilterRule { parent: SimpleType, condition: None },
            FilterRule { parent: TypeParameter, condition: None },
            FilterRule { parent: MarkerAnnotation, condition: None },
            FilterRule { parent: NormalAnnotation, condition: None },
            FilterRule { parent: MemberValuePair, condition: None },
            FilterRule { parent: QualifiedType, condition: None },
            FilterRule { parent: QualifiedName, condition: None },
            FilterRule { parent: MethodDeclaration, condition: None },
            FilterRule { parent: LabeledStatement, condition: None },
            FilterRule { parent: BreakStatement, condition: None },
            FilterRule { parent: ExpressionMethodReference, condition: None },
            FilterRule { parent: SwitchCase, condition: None },
            FilterRule { parent: MethodInvocation, condition: IsMethodName },
            FilterRule { parent: SuperConstructorInvocation, condition: IsSuperClass },
            FilterRule { parent: SuperMethodInvocation, condition: IsMethodNameOrSuperClass },
        ];
        FilterRuleSet { rules }
    }

    pub fn rules(&self) -> &[FilterRule] {
        &self.rules
    }

    pub fn matches(&self, parent: NodeKind, role: Role) -> bool {
        self.rules
            .iter()
            .any(|rule| rule.parent == parent && rule.condition.holds(role))
    }
}

/// Classify a leaf node given its parent: non-`SimpleName` kinds are
/// `NotSimpleName`; a `SimpleName` matching a filter rule is
/// `FilteredSimpleName`; everything else is `Cared`.
pub fn classify(node: &AstNode, parent: Option<&AstNode>, rules: &FilterRuleSet) -> NodeClass {
    if node.kind != NodeKind::SimpleName {
        return NodeClass::NotSimpleName;
    }
    let parent_kind = parent.map_or(NodeKind::Unknown, |p| p.kind);
    if rules.matches(parent_kind, node.role) {
        NodeClass::FilteredSimpleName
    } else {
        NodeClass::Cared
    }
}
