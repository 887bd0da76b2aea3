//! Recursive-descent parser for the supported Java subset: compilation
//! units, class/interface/enum declarations, the full statement set, and an
//! expression grammar with casts, generics, lambdas and method references.
//!
//! `>` is never lexed as part of a multi-character operator; shift and
//! shift-assign operators are recognised here by merging adjacent `>` tokens,
//! which keeps backtracking (casts, lambdas, local-variable declarations)
//! from corrupting token state inside generic types.

use super::ast::{AstNode, NodeKind, Role, Span};
use super::lexer::{Lexer, TokKind, Token};
use super::SyntaxError;

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default",
];

const PRIMITIVES: &[&str] =
    &["boolean", "byte", "short", "int", "long", "char", "float", "double"];

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> PResult<Self> {
        let toks = Lexer::new(src).tokenize()?;
        Ok(Parser { src, toks, pos: 0 })
    }

    // ---- token helpers -------------------------------------------------

    fn cur(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn nth(&self, n: usize) -> &Token {
        let idx = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[idx]
    }

    fn at(&self, text: &str) -> bool {
        self.cur().is(text)
    }

    fn at_ident(&self) -> bool {
        self.cur().kind == TokKind::Ident
    }

    fn at_eof(&self) -> bool {
        self.cur().kind == TokKind::Eof
    }

    fn bump(&mut self) -> Token {
        let tok = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> PResult<Token> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.err_here(format!("expected `{text}`, found `{}`", self.cur_desc())))
        }
    }

    fn expect_ident(&mut self) -> PResult<Token> {
        if self.at_ident() {
            Ok(self.bump())
        } else {
            Err(self.err_here(format!("expected identifier, found `{}`", self.cur_desc())))
        }
    }

    fn cur_desc(&self) -> String {
        if self.at_eof() {
            "<eof>".to_string()
        } else {
            self.cur().text.clone()
        }
    }

    fn err_here(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::syntax(self.src, self.cur().start, msg)
    }

    fn unsupported(&self, what: impl Into<String>) -> SyntaxError {
        SyntaxError::unsupported(self.src, self.cur().start, what)
    }

    /// `true` when tokens `pos+n` and `pos+n+1` touch in the source, so a
    /// run of `>` tokens spells a shift operator rather than nested generics.
    fn adjacent(&self, n: usize) -> bool {
        self.nth(n).end == self.nth(n + 1).start
    }

    fn span_from(&self, start: usize) -> Span {
        let end = if self.pos > 0 { self.toks[self.pos - 1].end } else { start };
        Span::new(start, end.max(start))
    }

    // ---- compilation unit ----------------------------------------------

    pub fn parse_compilation_unit(mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut unit = AstNode::new(NodeKind::CompilationUnit, Span::default());

        // leading annotations may belong to the package declaration
        let mut pending = Vec::new();
        while self.at("@") && !self.nth(1).is("interface") {
            pending.push(self.parse_annotation()?);
        }
        if self.at("package") {
            let pstart = self.cur().start;
            self.bump();
            let name = self.parse_name()?;
            self.expect(";")?;
            let mut pkg = AstNode::new(NodeKind::PackageDeclaration, self.span_from(pstart));
            pkg.children.append(&mut pending);
            pkg.push(name);
            unit.push(pkg);
        } else {
            unit.children.append(&mut pending);
        }
        while self.at("import") {
            let istart = self.cur().start;
            self.bump();
            self.eat("static");
            let mut name = self.parse_name()?;
            if self.eat(".") {
                self.expect("*")?;
                // on-demand import keeps only the qualifier name
            }
            self.expect(";")?;
            let mut imp = AstNode::new(NodeKind::ImportDeclaration, self.span_from(istart));
            name.role = Role::Other;
            imp.push(name);
            unit.push(imp);
        }
        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            let decl = self.parse_type_decl()?;
            unit.push(decl);
        }
        unit.span = self.span_from(start);
        Ok(unit)
    }

    /// Parse a `{ ... }` statement sequence as the body of a synthetic
    /// method, for snippet inputs that are a bare method body.
    pub fn parse_method_body_snippet(mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut block = AstNode::new(NodeKind::Block, Span::default());
        while !self.at_eof() {
            block.push(self.parse_statement()?);
        }
        block.span = self.span_from(start);

        // no synthetic name: the wrapper must not fabricate tokens
        let mut method = AstNode::new(NodeKind::MethodDeclaration, block.span);
        method.push(block);
        let mut unit = AstNode::new(NodeKind::CompilationUnit, method.span);
        unit.push(method);
        Ok(unit)
    }

    // ---- declarations ---------------------------------------------------

    fn parse_modifiers(&mut self) -> PResult<Vec<AstNode>> {
        let mut out = Vec::new();
        loop {
            if self.at("@") && !self.nth(1).is("interface") {
                out.push(self.parse_annotation()?);
            } else if MODIFIERS.contains(&self.cur().text.as_str())
                && self.cur().kind == TokKind::Keyword
            {
                let tok = self.bump();
                out.push(AstNode::leaf(NodeKind::Modifier, tok.text, Span::new(tok.start, tok.end)));
            } else {
                return Ok(out);
            }
        }
    }

    fn parse_annotation(&mut self) -> PResult<AstNode> {
        let start = self.expect("@")?.start;
        let name = self.parse_name()?;
        if self.eat("(") {
            if self.eat(")") {
                let mut node = AstNode::new(NodeKind::NormalAnnotation, self.span_from(start));
                node.push(name);
                return Ok(node);
            }
            // `ident =` distinguishes member-value pairs from a single value
            if self.at_ident() && self.nth(1).is("=") {
                let mut node = AstNode::new(NodeKind::NormalAnnotation, Span::default());
                node.push(name);
                loop {
                    let pstart = self.cur().start;
                    let key = self.expect_ident()?;
                    self.expect("=")?;
                    let value = self.parse_member_value()?;
                    let mut pair = AstNode::new(NodeKind::MemberValuePair, Span::default());
                    pair.push(AstNode::leaf(NodeKind::SimpleName, key.text, Span::new(key.start, key.end)));
                    pair.push(value);
                    pair.span = self.span_from(pstart);
                    node.push(pair);
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect(")")?;
                node.span = self.span_from(start);
                Ok(node)
            } else {
                let value = self.parse_member_value()?;
                self.expect(")")?;
                let mut node = AstNode::new(NodeKind::SingleMemberAnnotation, self.span_from(start));
                node.push(name);
                node.push(value);
                Ok(node)
            }
        } else {
            let mut node = AstNode::new(NodeKind::MarkerAnnotation, self.span_from(start));
            node.push(name);
            Ok(node)
        }
    }

    fn parse_member_value(&mut self) -> PResult<AstNode> {
        if self.at("{") {
            self.parse_array_initializer()
        } else if self.at("@") {
            self.parse_annotation()
        } else {
            self.parse_expr()
        }
    }

    fn parse_type_decl(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut mods = self.parse_modifiers()?;
        let kind = if self.at("class") {
            NodeKind::TypeDeclaration
        } else if self.at("interface") {
            NodeKind::TypeDeclaration
        } else if self.at("enum") {
            NodeKind::EnumDeclaration
        } else if self.at("@") && self.nth(1).is("interface") {
            NodeKind::AnnotationTypeDeclaration
        } else if self.at("record") {
            return Err(self.unsupported("record declaration"));
        } else {
            return Err(self.err_here(format!(
                "expected type declaration, found `{}`",
                self.cur_desc()
            )));
        };

        if kind == NodeKind::AnnotationTypeDeclaration {
            self.bump(); // @
            self.bump(); // interface
        } else {
            self.bump();
        }

        let name = self.expect_ident()?;
        let mut decl = AstNode::new(kind, Span::default());
        decl.children.append(&mut mods);
        decl.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));

        if kind == NodeKind::EnumDeclaration {
            if self.eat("implements") {
                loop {
                    decl.push(self.parse_type()?);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect("{")?;
            while self.at_ident() {
                decl.push(self.parse_enum_constant()?);
                if !self.eat(",") {
                    break;
                }
            }
            if self.eat(";") {
                while !self.at("}") && !self.at_eof() {
                    if self.eat(";") {
                        continue;
                    }
                    decl.push(self.parse_member()?);
                }
            }
            self.expect("}")?;
        } else {
            if self.at("<") {
                self.parse_type_params(&mut decl)?;
            }
            if self.eat("extends") {
                loop {
                    decl.push(self.parse_type()?);
                    // interfaces may extend several types
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            if self.eat("implements") {
                loop {
                    decl.push(self.parse_type()?);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect("{")?;
            while !self.at("}") && !self.at_eof() {
                if self.eat(";") {
                    continue;
                }
                decl.push(self.parse_member()?);
            }
            self.expect("}")?;
        }
        decl.span = self.span_from(start);
        Ok(decl)
    }

    fn parse_enum_constant(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let name = self.expect_ident()?;
        let mut node = AstNode::new(NodeKind::EnumConstantDeclaration, Span::default());
        node.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
        if self.at("(") {
            for arg in self.parse_args()? {
                node.push(arg);
            }
        }
        if self.at("{") {
            node.push(self.parse_anonymous_body()?);
        }
        node.span = self.span_from(start);
        Ok(node)
    }

    fn parse_member(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mods = self.parse_modifiers()?;

        if self.at("{") {
            // instance/static initializer block
            let mut node = AstNode::new(NodeKind::Initializer, Span::default());
            for m in mods {
                node.push(m);
            }
            node.push(self.parse_block()?);
            node.span = self.span_from(start);
            return Ok(node);
        }
        if self.at("class") || self.at("interface") || self.at("enum")
            || (self.at("@") && self.nth(1).is("interface"))
        {
            let mut decl = self.parse_type_decl()?;
            let mut merged = mods;
            merged.append(&mut decl.children);
            decl.children = merged;
            decl.span = self.span_from(start);
            return Ok(decl);
        }

        let mut decl = AstNode::new(NodeKind::MethodDeclaration, Span::default());
        for m in mods {
            decl.push(m);
        }
        if self.at("<") {
            self.parse_type_params(&mut decl)?;
        }

        // constructor: identifier immediately followed by `(`
        if self.at_ident() && self.nth(1).is("(") {
            let name = self.bump();
            decl.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
            self.parse_method_rest(&mut decl)?;
            decl.span = self.span_from(start);
            return Ok(decl);
        }

        let ty = if self.at("void") {
            let tok = self.bump();
            AstNode::leaf(NodeKind::PrimitiveType, tok.text, Span::new(tok.start, tok.end))
        } else {
            self.parse_type()?
        };

        if self.at_ident() && self.nth(1).is("(") {
            let name = self.bump();
            decl.push(ty);
            decl.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
            self.parse_method_rest(&mut decl)?;
            decl.span = self.span_from(start);
            Ok(decl)
        } else {
            // field declaration: reuse collected modifiers
            let mut field = AstNode::new(NodeKind::FieldDeclaration, Span::default());
            field.children = std::mem::take(&mut decl.children);
            field.push(ty);
            loop {
                field.push(self.parse_fragment()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(";")?;
            field.span = self.span_from(start);
            Ok(field)
        }
    }

    fn parse_method_rest(&mut self, decl: &mut AstNode) -> PResult<()> {
        self.expect("(")?;
        if !self.at(")") {
            loop {
                decl.push(self.parse_parameter()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        while self.at("[") {
            self.bump();
            self.expect("]")?;
        }
        if self.eat("throws") {
            loop {
                decl.push(self.parse_type()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        if self.eat("default") {
            // annotation-type member default value
            decl.push(self.parse_member_value()?);
        }
        if self.at("{") {
            let body = self.parse_block()?;
            decl.push(body);
        } else {
            self.expect(";")?;
        }
        Ok(())
    }

    fn parse_parameter(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut node = AstNode::new(NodeKind::SingleVariableDeclaration, Span::default());
        for m in self.parse_modifiers()? {
            node.push(m);
        }
        let mut ty = self.parse_type()?;
        if self.eat("...") {
            let span = ty.span;
            let mut arr = AstNode::new(NodeKind::ArrayType, span);
            arr.push(ty);
            ty = arr;
        }
        node.push(ty);
        let name = self.expect_ident()?;
        node.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
        while self.at("[") {
            self.bump();
            self.expect("]")?;
        }
        node.span = self.span_from(start);
        Ok(node)
    }

    fn parse_fragment(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let name = self.expect_ident()?;
        let mut frag = AstNode::new(NodeKind::VariableDeclarationFragment, Span::default());
        frag.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
        while self.at("[") {
            self.bump();
            self.expect("]")?;
        }
        if self.eat("=") {
            if self.at("{") {
                frag.push(self.parse_array_initializer()?);
            } else {
                frag.push(self.parse_expr()?);
            }
        }
        frag.span = self.span_from(start);
        Ok(frag)
    }

    // ---- types -----------------------------------------------------------

    fn parse_type_params(&mut self, decl: &mut AstNode) -> PResult<()> {
        self.expect("<")?;
        loop {
            let start = self.cur().start;
            let mut param = AstNode::new(NodeKind::TypeParameter, Span::default());
            while self.at("@") {
                param.push(self.parse_annotation()?);
            }
            let name = self.expect_ident()?;
            param.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
            if self.eat("extends") {
                loop {
                    param.push(self.parse_type()?);
                    if !self.eat("&") {
                        break;
                    }
                }
            }
            param.span = self.span_from(start);
            decl.push(param);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(">")?;
        Ok(())
    }

    fn parse_type(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut annotations = Vec::new();
        while self.at("@") {
            annotations.push(self.parse_annotation()?);
        }
        let mut base = if PRIMITIVES.contains(&self.cur().text.as_str())
            && self.cur().kind == TokKind::Keyword
        {
            let tok = self.bump();
            AstNode::leaf(NodeKind::PrimitiveType, tok.text, Span::new(tok.start, tok.end))
        } else if self.at("void") {
            let tok = self.bump();
            AstNode::leaf(NodeKind::PrimitiveType, tok.text, Span::new(tok.start, tok.end))
        } else {
            self.parse_class_type()?
        };
        for ann in annotations {
            base.children.insert(0, ann);
        }
        while self.at("[") && self.nth(1).is("]") {
            self.bump();
            self.bump();
            let mut arr = AstNode::new(NodeKind::ArrayType, self.span_from(start));
            arr.push(base);
            base = arr;
        }
        Ok(base)
    }

    /// Class-or-interface type: a (possibly qualified) name with optional
    /// type arguments at any segment. `a.b.C` stays a qualified name inside
    /// one `SimpleType`; a parameterized qualifier followed by `.Name` forms
    /// a `QualifiedType`.
    fn parse_class_type(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let first = self.expect_ident()?;
        let mut name = Some(AstNode::leaf(
            NodeKind::SimpleName,
            first.text,
            Span::new(first.start, first.end),
        ));
        let mut ty: Option<AstNode> = None;
        loop {
            if self.at("<") && self.type_args_ahead() {
                let base = match ty.take() {
                    Some(t) => t,
                    None => {
                        let mut st = AstNode::new(NodeKind::SimpleType, self.span_from(start));
                        st.push(name.take().expect("name present before type args"));
                        st
                    }
                };
                let mut pt = AstNode::new(NodeKind::ParameterizedType, Span::default());
                pt.push(base);
                self.parse_type_args(&mut pt)?;
                pt.span = self.span_from(start);
                ty = Some(pt);
            }
            if self.at(".") && self.nth(1).kind == TokKind::Ident {
                self.bump();
                let seg = self.expect_ident()?;
                let leaf =
                    AstNode::leaf(NodeKind::SimpleName, seg.text, Span::new(seg.start, seg.end));
                match (&mut name, &mut ty) {
                    (Some(qualifier), None) => {
                        let mut qn = AstNode::new(NodeKind::QualifiedName, self.span_from(start));
                        qn.push(std::mem::replace(qualifier, AstNode::new(NodeKind::Unknown, Span::default())));
                        qn.push(leaf);
                        *qualifier = qn;
                    }
                    (None, Some(qualifier_ty)) => {
                        let mut qt = AstNode::new(NodeKind::QualifiedType, self.span_from(start));
                        qt.push(std::mem::replace(qualifier_ty, AstNode::new(NodeKind::Unknown, Span::default())));
                        qt.push(leaf);
                        *qualifier_ty = qt;
                    }
                    _ => unreachable!("exactly one of name/type is live"),
                }
            } else {
                break;
            }
        }
        Ok(match (name, ty) {
            (_, Some(t)) => t,
            (Some(n), None) => {
                let mut st = AstNode::new(NodeKind::SimpleType, self.span_from(start));
                st.push(n);
                st
            }
            (None, None) => unreachable!(),
        })
    }

    /// Lookahead check that a `<` really opens type arguments (rather than a
    /// comparison) by attempting a throwaway parse.
    fn type_args_ahead(&mut self) -> bool {
        let save = self.pos;
        let mut probe = AstNode::new(NodeKind::Unknown, Span::default());
        let ok = self.parse_type_args(&mut probe).is_ok();
        self.pos = save;
        ok
    }

    fn parse_type_args(&mut self, parent: &mut AstNode) -> PResult<()> {
        self.expect("<")?;
        if self.eat(">") {
            return Ok(()); // diamond
        }
        loop {
            if self.at("?") {
                let start = self.bump().start;
                let mut wc = AstNode::new(NodeKind::WildcardType, Span::default());
                if self.eat("extends") || self.eat("super") {
                    wc.push(self.parse_type()?);
                }
                wc.span = self.span_from(start);
                parent.push(wc);
            } else {
                parent.push(self.parse_type()?);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(">")?;
        Ok(())
    }

    /// Simple or qualified name (no type arguments).
    fn parse_name(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let first = self.expect_ident()?;
        let mut name =
            AstNode::leaf(NodeKind::SimpleName, first.text, Span::new(first.start, first.end));
        while self.at(".") && self.nth(1).kind == TokKind::Ident {
            self.bump();
            let seg = self.expect_ident()?;
            let mut qn = AstNode::new(NodeKind::QualifiedName, Span::default());
            qn.push(name);
            qn.push(AstNode::leaf(NodeKind::SimpleName, seg.text, Span::new(seg.start, seg.end)));
            qn.span = self.span_from(start);
            name = qn;
        }
        Ok(name)
    }

    // ---- statements -------------------------------------------------------

    fn parse_block(&mut self) -> PResult<AstNode> {
        let start = self.expect("{")?.start;
        let mut block = AstNode::new(NodeKind::Block, Span::default());
        while !self.at("}") && !self.at_eof() {
            block.push(self.parse_statement()?);
        }
        self.expect("}")?;
        block.span = self.span_from(start);
        Ok(block)
    }

    pub fn parse_statement(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        match self.cur().text.as_str() {
            "{" => return self.parse_block(),
            ";" => {
                self.bump();
                return Ok(AstNode::new(NodeKind::EmptyStatement, self.span_from(start)));
            }
            "if" => {
                self.bump();
                self.expect("(")?;
                let cond = self.parse_expr()?;
                self.expect(")")?;
                let then = self.parse_statement()?;
                let mut node = AstNode::new(NodeKind::IfStatement, Span::default());
                node.push(cond);
                node.push(then);
                if self.eat("else") {
                    node.push(self.parse_statement()?);
                }
                node.span = self.span_from(start);
                return Ok(node);
            }
            "while" => {
                self.bump();
                self.expect("(")?;
                let cond = self.parse_expr()?;
                self.expect(")")?;
                let body = self.parse_statement()?;
                let mut node = AstNode::new(NodeKind::WhileStatement, self.span_from(start));
                node.push(cond);
                node.push(body);
                return Ok(node);
            }
            "do" => {
                self.bump();
                let body = self.parse_statement()?;
                self.expect("while")?;
                self.expect("(")?;
                let cond = self.parse_expr()?;
                self.expect(")")?;
                self.expect(";")?;
                let mut node = AstNode::new(NodeKind::DoStatement, self.span_from(start));
                node.push(body);
                node.push(cond);
                return Ok(node);
            }
            "for" => return self.parse_for(),
            "switch" => return self.parse_switch(),
            "break" | "continue" => {
                let kw = self.bump();
                let kind = if kw.text == "break" {
                    NodeKind::BreakStatement
                } else {
                    NodeKind::ContinueStatement
                };
                let mut node = AstNode::new(kind, Span::default());
                if self.at_ident() {
                    let label = self.bump();
                    node.push(AstNode::leaf(
                        NodeKind::SimpleName,
                        label.text,
                        Span::new(label.start, label.end),
                    ));
                }
                self.expect(";")?;
                node.span = self.span_from(start);
                return Ok(node);
            }
            "return" => {
                self.bump();
                let mut node = AstNode::new(NodeKind::ReturnStatement, Span::default());
                if !self.at(";") {
                    node.push(self.parse_expr()?);
                }
                self.expect(";")?;
                node.span = self.span_from(start);
                return Ok(node);
            }
            "throw" => {
                self.bump();
                let mut node = AstNode::new(NodeKind::ThrowStatement, Span::default());
                node.push(self.parse_expr()?);
                self.expect(";")?;
                node.span = self.span_from(start);
                return Ok(node);
            }
            "try" => return self.parse_try(),
            "synchronized" => {
                self.bump();
                self.expect("(")?;
                let lock = self.parse_expr()?;
                self.expect(")")?;
                let body = self.parse_block()?;
                let mut node = AstNode::new(NodeKind::SynchronizedStatement, self.span_from(start));
                node.push(lock);
                node.push(body);
                return Ok(node);
            }
            "assert" => {
                self.bump();
                let mut node = AstNode::new(NodeKind::AssertStatement, Span::default());
                node.push(self.parse_expr()?);
                if self.eat(":") {
                    node.push(self.parse_expr()?);
                }
                self.expect(";")?;
                node.span = self.span_from(start);
                return Ok(node);
            }
            "this" if self.nth(1).is("(") => {
                self.bump();
                let mut node = AstNode::new(NodeKind::ConstructorInvocation, Span::default());
                for arg in self.parse_args()? {
                    node.push(arg);
                }
                self.expect(";")?;
                node.span = self.span_from(start);
                return Ok(node);
            }
            "super" if self.nth(1).is("(") => {
                self.bump();
                let mut node = AstNode::new(NodeKind::SuperConstructorInvocation, Span::default());
                for arg in self.parse_args()? {
                    node.push(arg);
                }
                self.expect(";")?;
                node.span = self.span_from(start);
                return Ok(node);
            }
            "class" | "abstract" | "final" | "static" if self.class_decl_ahead() => {
                return self.parse_type_decl();
            }
            _ => {}
        }

        // labeled statement: identifier `:` (but not `::`)
        if self.at_ident() && self.nth(1).is(":") {
            let label = self.bump();
            self.bump();
            let mut node = AstNode::new(NodeKind::LabeledStatement, Span::default());
            node.push(AstNode::leaf(NodeKind::SimpleName, label.text, Span::new(label.start, label.end)));
            node.push(self.parse_statement()?);
            node.span = self.span_from(start);
            return Ok(node);
        }

        if let Some(decl) = self.try_parse_local_var_decl()? {
            return Ok(decl);
        }

        let expr = self.parse_expr()?;
        self.expect(";")?;
        let mut node = AstNode::new(NodeKind::ExpressionStatement, self.span_from(start));
        node.push(expr);
        Ok(node)
    }

    fn class_decl_ahead(&self) -> bool {
        let mut n = 0;
        while MODIFIERS.contains(&self.nth(n).text.as_str()) {
            n += 1;
        }
        self.nth(n).is("class") || self.nth(n).is("interface") || self.nth(n).is("enum")
    }

    /// Attempt `modifiers type ident (dims)? (= | , | ;)`; rolls back fully
    /// when the lookahead does not commit to a declaration.
    fn try_parse_local_var_decl(&mut self) -> PResult<Option<AstNode>> {
        let save = self.pos;
        let start = self.cur().start;
        let mut node = AstNode::new(NodeKind::VariableDeclarationStatement, Span::default());

        let mods = match self.parse_modifiers() {
            Ok(m) => m,
            Err(_) => {
                self.pos = save;
                return Ok(None);
            }
        };
        let forced = !mods.is_empty();
        for m in mods {
            node.push(m);
        }
        let ty = match self.parse_type() {
            Ok(t) => t,
            Err(e) => {
                if forced {
                    return Err(e);
                }
                self.pos = save;
                return Ok(None);
            }
        };
        let committed = self.at_ident()
            && (self.nth(1).is("=") || self.nth(1).is(",") || self.nth(1).is(";")
                || (self.nth(1).is("[") && self.nth(2).is("]")));
        if !committed {
            if forced {
                return Err(self.err_here("expected variable declarator"));
            }
            self.pos = save;
            return Ok(None);
        }
        node.push(ty);
        loop {
            node.push(self.parse_fragment()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(";")?;
        node.span = self.span_from(start);
        Ok(Some(node))
    }

    fn parse_for(&mut self) -> PResult<AstNode> {
        let start = self.expect("for")?.start;
        self.expect("(")?;

        // enhanced for: `modifiers type ident :`
        let save = self.pos;
        if let Ok(param) = self.try_enhanced_for_param() {
            let mut node = AstNode::new(NodeKind::EnhancedForStatement, Span::default());
            node.push(param);
            node.push(self.parse_expr()?);
            self.expect(")")?;
            node.push(self.parse_statement()?);
            node.span = self.span_from(start);
            return Ok(node);
        }
        self.pos = save;

        let mut node = AstNode::new(NodeKind::ForStatement, Span::default());
        if !self.at(";") {
            if let Some(init) = self.try_parse_for_init_decl()? {
                node.push(init);
            } else {
                loop {
                    node.push(self.parse_expr()?);
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect(";")?;
            }
        } else {
            self.bump();
        }
        if !self.at(";") {
            node.push(self.parse_expr()?);
        }
        self.expect(";")?;
        if !self.at(")") {
            loop {
                node.push(self.parse_expr()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        node.push(self.parse_statement()?);
        node.span = self.span_from(start);
        Ok(node)
    }

    fn try_enhanced_for_param(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut param = AstNode::new(NodeKind::SingleVariableDeclaration, Span::default());
        for m in self.parse_modifiers()? {
            param.push(m);
        }
        param.push(self.parse_type()?);
        let name = self.expect_ident()?;
        param.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
        self.expect(":")?;
        param.span = self.span_from(start);
        Ok(param)
    }

    /// `type frag (, frag)* ;` as a for-init declaration, with rollback.
    fn try_parse_for_init_decl(&mut self) -> PResult<Option<AstNode>> {
        let save = self.pos;
        let start = self.cur().start;
        let mut node = AstNode::new(NodeKind::VariableDeclarationExpression, Span::default());
        let mods = match self.parse_modifiers() {
            Ok(m) => m,
            Err(_) => {
                self.pos = save;
                return Ok(None);
            }
        };
        for m in mods {
            node.push(m);
        }
        let Ok(ty) = self.parse_type() else {
            self.pos = save;
            return Ok(None);
        };
        if !(self.at_ident() && (self.nth(1).is("=") || self.nth(1).is(",") || self.nth(1).is(";"))) {
            self.pos = save;
            return Ok(None);
        }
        node.push(ty);
        loop {
            node.push(self.parse_fragment()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(";")?;
        node.span = self.span_from(start);
        Ok(Some(node))
    }

    fn parse_switch(&mut self) -> PResult<AstNode> {
        let start = self.expect("switch")?.start;
        self.expect("(")?;
        let selector = self.parse_expr()?;
        self.expect(")")?;
        self.expect("{")?;
        let mut node = AstNode::new(NodeKind::SwitchStatement, Span::default());
        node.push(selector);
        while !self.at("}") && !self.at_eof() {
            if self.at("case") || self.at("default") {
                let cstart = self.cur().start;
                let is_case = self.bump().text == "case";
                let mut case = AstNode::new(NodeKind::SwitchCase, Span::default());
                if is_case {
                    loop {
                        case.push(self.parse_expr()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
                if self.at("->") {
                    return Err(self.unsupported("switch arrow case"));
                }
                self.expect(":")?;
                case.span = self.span_from(cstart);
                node.push(case);
            } else {
                node.push(self.parse_statement()?);
            }
        }
        self.expect("}")?;
        node.span = self.span_from(start);
        Ok(node)
    }

    fn parse_try(&mut self) -> PResult<AstNode> {
        let start = self.expect("try")?.start;
        let mut node = AstNode::new(NodeKind::TryStatement, Span::default());
        if self.eat("(") {
            loop {
                let rstart = self.cur().start;
                let mut res = AstNode::new(NodeKind::VariableDeclarationExpression, Span::default());
                for m in self.parse_modifiers()? {
                    res.push(m);
                }
                res.push(self.parse_type()?);
                let mut frag = AstNode::new(NodeKind::VariableDeclarationFragment, Span::default());
                let fstart = self.cur().start;
                let name = self.expect_ident()?;
                frag.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
                self.expect("=")?;
                frag.push(self.parse_expr()?);
                frag.span = self.span_from(fstart);
                res.push(frag);
                res.span = self.span_from(rstart);
                node.push(res);
                if !self.eat(";") {
                    break;
                }
                if self.at(")") {
                    break;
                }
            }
            self.expect(")")?;
        }
        node.push(self.parse_block()?);
        while self.at("catch") {
            let cstart = self.bump().start;
            self.expect("(")?;
            let mut clause = AstNode::new(NodeKind::CatchClause, Span::default());
            let pstart = self.cur().start;
            let mut param = AstNode::new(NodeKind::SingleVariableDeclaration, Span::default());
            for m in self.parse_modifiers()? {
                param.push(m);
            }
            let mut ty = self.parse_type()?;
            if self.at("|") {
                let ustart = ty.span.start;
                let mut union = AstNode::new(NodeKind::UnionType, Span::default());
                union.push(ty);
                while self.eat("|") {
                    union.push(self.parse_type()?);
                }
                union.span = self.span_from(ustart);
                ty = union;
            }
            param.push(ty);
            let name = self.expect_ident()?;
            param.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
            param.span = self.span_from(pstart);
            self.expect(")")?;
            clause.push(param);
            clause.push(self.parse_block()?);
            clause.span = self.span_from(cstart);
            node.push(clause);
        }
        if self.eat("finally") {
            node.push(self.parse_block()?);
        }
        node.span = self.span_from(start);
        Ok(node)
    }

    // ---- expressions -------------------------------------------------------

    pub fn parse_expr(&mut self) -> PResult<AstNode> {
        self.parse_assignment()
    }

    fn at_assign_op(&self) -> Option<usize> {
        // returns token count of the operator
        let t = self.cur();
        if t.kind != TokKind::Punct {
            return None;
        }
        match t.text.as_str() {
            "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "<<=" => Some(1),
            ">" if self.nth(1).is(">") && self.adjacent(0) => {
                if self.nth(2).is(">=") && self.adjacent(1) {
                    Some(3) // >>>=
                } else if self.nth(2).is("=") && self.adjacent(1) {
                    Some(3) // >>= split further by lexer quirks
                } else {
                    None
                }
            }
            ">" if self.nth(1).is(">=") && self.adjacent(0) => Some(2), // >>=
            _ => None,
        }
    }

    fn parse_assignment(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let lhs = self.parse_ternary()?;
        if let Some(op_len) = self.at_assign_op() {
            for _ in 0..op_len {
                self.bump();
            }
            let rhs = self.parse_assignment()?;
            let mut node = AstNode::new(NodeKind::Assignment, self.span_from(start));
            node.push(lhs);
            node.push(rhs);
            return Ok(node);
        }
        Ok(lhs)
    }

    fn parse_ternary(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let cond = self.parse_binary(0)?;
        if self.eat("?") {
            let then = self.parse_expr()?;
            self.expect(":")?;
            let alt = self.parse_assignment()?;
            let mut node = AstNode::new(NodeKind::ConditionalExpression, self.span_from(start));
            node.push(cond);
            node.push(then);
            node.push(alt);
            return Ok(node);
        }
        Ok(cond)
    }

    /// Binary operator levels, loosest first.
    fn parse_binary(&mut self, level: usize) -> PResult<AstNode> {
        const LEVELS: usize = 10;
        if level >= LEVELS {
            return self.parse_unary();
        }
        let start = self.cur().start;
        let mut lhs = self.parse_binary(level + 1)?;
        loop {
            let matched = match level {
                0 => self.match_op(&["||"]),
                1 => self.match_op(&["&&"]),
                2 => {
                    if self.at("|") && !self.nth(1).is("|") {
                        self.bump();
                        true
                    } else {
                        false
                    }
                }
                3 => self.match_op(&["^"]),
                4 => {
                    if self.at("&") && !self.nth(1).is("&") {
                        self.bump();
                        true
                    } else {
                        false
                    }
                }
                5 => self.match_op(&["==", "!="]),
                6 => {
                    if self.at("instanceof") {
                        self.bump();
                        let ty = self.parse_type()?;
                        let mut node = AstNode::new(NodeKind::InstanceofExpression, self.span_from(start));
                        node.push(lhs);
                        node.push(ty);
                        lhs = node;
                        continue;
                    }
                    self.match_relational()
                }
                7 => {
                    if let Some(n) = self.match_shift() {
                        for _ in 0..n {
                            self.bump();
                        }
                        true
                    } else {
                        false
                    }
                }
                8 => self.match_op(&["+", "-"]),
                9 => self.match_op(&["*", "/", "%"]),
                _ => false,
            };
            if !matched {
                return Ok(lhs);
            }
            let rhs = self.parse_binary(level + 1)?;
            let mut node = AstNode::new(NodeKind::InfixExpression, self.span_from(start));
            node.push(lhs);
            node.push(rhs);
            lhs = node;
        }
    }

    fn match_op(&mut self, ops: &[&str]) -> bool {
        if self.cur().kind == TokKind::Punct && ops.contains(&self.cur().text.as_str()) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn match_relational(&mut self) -> bool {
        if self.at("<=") || self.at(">=") {
            self.bump();
            return true;
        }
        if self.at("<") {
            self.bump();
            return true;
        }
        // lone `>` (not the start of a shift)
        if self.at(">") && !(self.nth(1).is(">") && self.adjacent(0))
            && !(self.nth(1).is(">=") && self.adjacent(0))
        {
            self.bump();
            return true;
        }
        false
    }

    /// Number of tokens forming a shift operator at the cursor, if any.
    fn match_shift(&self) -> Option<usize> {
        if self.at("<<") {
            return Some(1);
        }
        if self.at(">") && self.nth(1).is(">") && self.adjacent(0) {
            if self.nth(2).is(">") && self.adjacent(1) {
                return Some(3); // >>>
            }
            if self.nth(2).is("=") && self.adjacent(1) {
                return None; // >>= is an assignment
            }
            if self.nth(2).is(">=") && self.adjacent(1) {
                return None; // >>>= is an assignment
            }
            return Some(2); // >>
        }
        None
    }

    fn parse_unary(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        if self.at("+") || self.at("-") || self.at("!") || self.at("~") || self.at("++") || self.at("--")
        {
            self.bump();
            let operand = self.parse_unary()?;
            let mut node = AstNode::new(NodeKind::PrefixExpression, self.span_from(start));
            node.push(operand);
            return Ok(node);
        }
        if self.at("(") {
            if let Some(cast) = self.try_parse_cast()? {
                return Ok(cast);
            }
        }
        self.parse_postfix()
    }

    fn try_parse_cast(&mut self) -> PResult<Option<AstNode>> {
        let save = self.pos;
        let start = self.cur().start;
        self.bump(); // (
        let Ok(ty) = self.parse_type() else {
            self.pos = save;
            return Ok(None);
        };
        if !self.at(")") {
            self.pos = save;
            return Ok(None);
        }
        let is_primitive = matches!(ty.kind, NodeKind::PrimitiveType | NodeKind::ArrayType);
        self.bump(); // )
        let next = self.cur();
        let operand_start = match next.kind {
            TokKind::Ident | TokKind::IntLit | TokKind::FloatLit | TokKind::CharLit
            | TokKind::StringLit => true,
            TokKind::Keyword => {
                matches!(next.text.as_str(), "this" | "super" | "new" | "true" | "false" | "null")
            }
            TokKind::Punct => {
                next.text == "(" || next.text == "!" || next.text == "~"
                    || (is_primitive && (next.text == "+" || next.text == "-"))
            }
            TokKind::Eof => false,
        };
        if !operand_start {
            self.pos = save;
            return Ok(None);
        }
        let operand = self.parse_unary()?;
        let mut node = AstNode::new(NodeKind::CastExpression, self.span_from(start));
        node.push(ty);
        node.push(operand);
        Ok(Some(node))
    }

    fn parse_postfix(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let mut expr = self.parse_primary()?;
        loop {
            if self.at(".") {
                if self.nth(1).is("this") {
                    self.bump();
                    self.bump();
                    let mut node = AstNode::new(NodeKind::ThisExpression, self.span_from(start));
                    node.push(expr);
                    expr = node;
                    continue;
                }
                if self.nth(1).is("class") {
                    self.bump();
                    self.bump();
                    let mut ty = AstNode::new(NodeKind::SimpleType, expr.span);
                    ty.push(expr);
                    let mut node = AstNode::new(NodeKind::TypeLiteral, self.span_from(start));
                    node.push(ty);
                    expr = node;
                    continue;
                }
                if self.nth(1).is("super") {
                    expr = self.parse_super_suffix(expr, start)?;
                    continue;
                }
                if self.nth(1).is("new") {
                    return Err(self.unsupported("qualified class instance creation"));
                }
                if self.nth(1).is("<") {
                    // explicit type arguments on an invocation
                    self.bump();
                    let mut inv = AstNode::new(NodeKind::MethodInvocation, Span::default());
                    inv.push_with_role(expr, Role::Receiver);
                    let mut probe = AstNode::new(NodeKind::Unknown, Span::default());
                    self.parse_type_args(&mut probe)?;
                    for ty in probe.children {
                        inv.push_with_role(ty, Role::TypeArgument);
                    }
                    let name = self.expect_ident()?;
                    inv.push_with_role(
                        AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)),
                        Role::MethodName,
                    );
                    for arg in self.parse_args()? {
                        inv.push(arg);
                    }
                    inv.span = self.span_from(start);
                    expr = inv;
                    continue;
                }
                if self.nth(1).kind == TokKind::Ident {
                    self.bump();
                    let seg = self.bump();
                    let leaf =
                        AstNode::leaf(NodeKind::SimpleName, seg.text, Span::new(seg.start, seg.end));
                    if self.at("(") {
                        let mut inv = AstNode::new(NodeKind::MethodInvocation, Span::default());
                        inv.push_with_role(expr, Role::Receiver);
                        inv.push_with_role(leaf, Role::MethodName);
                        for arg in self.parse_args()? {
                            inv.push(arg);
                        }
                        inv.span = self.span_from(start);
                        expr = inv;
                    } else if matches!(expr.kind, NodeKind::SimpleName | NodeKind::QualifiedName) {
                        let mut qn = AstNode::new(NodeKind::QualifiedName, self.span_from(start));
                        qn.push(expr);
                        qn.push(leaf);
                        expr = qn;
                    } else {
                        let mut fa = AstNode::new(NodeKind::FieldAccess, self.span_from(start));
                        fa.push(expr);
                        fa.push(leaf);
                        expr = fa;
                    }
                    continue;
                }
                return Err(self.err_here("expected member name after `.`"));
            }
            if self.at("[") && !self.nth(1).is("]") {
                self.bump();
                let index = self.parse_expr()?;
                self.expect("]")?;
                let mut node = AstNode::new(NodeKind::ArrayAccess, self.span_from(start));
                node.push(expr);
                node.push(index);
                expr = node;
                continue;
            }
            if self.at("::") {
                self.bump();
                if self.eat("new") {
                    let mut ty = AstNode::new(NodeKind::SimpleType, expr.span);
                    ty.push(expr);
                    let mut node = AstNode::new(NodeKind::CreationReference, self.span_from(start));
                    node.push(ty);
                    expr = node;
                } else {
                    let name = self.expect_ident()?;
                    let mut node =
                        AstNode::new(NodeKind::ExpressionMethodReference, self.span_from(start));
                    node.push(expr);
                    node.push_with_role(
                        AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)),
                        Role::MethodName,
                    );
                    expr = node;
                }
                continue;
            }
            if self.at("++") || self.at("--") {
                self.bump();
                let mut node = AstNode::new(NodeKind::PostfixExpression, self.span_from(start));
                node.push(expr);
                expr = node;
                continue;
            }
            return Ok(expr);
        }
    }

    fn parse_super_suffix(&mut self, qualifier: AstNode, start: usize) -> PResult<AstNode> {
        self.bump(); // .
        self.bump(); // super
        if self.at("(") {
            let mut node = AstNode::new(NodeKind::SuperConstructorInvocation, Span::default());
            node.push_with_role(qualifier, Role::SuperClass);
            for arg in self.parse_args()? {
                node.push(arg);
            }
            node.span = self.span_from(start);
            return Ok(node);
        }
        self.expect(".")?;
        let name = self.expect_ident()?;
        let leaf = AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end));
        if self.at("(") {
            let mut node = AstNode::new(NodeKind::SuperMethodInvocation, Span::default());
            node.push_with_role(qualifier, Role::SuperClass);
            node.push_with_role(leaf, Role::MethodName);
            for arg in self.parse_args()? {
                node.push(arg);
            }
            node.span = self.span_from(start);
            Ok(node)
        } else {
            let mut node = AstNode::new(NodeKind::SuperFieldAccess, self.span_from(start));
            node.push_with_role(qualifier, Role::SuperClass);
            node.push(leaf);
            Ok(node)
        }
    }

    fn parse_args(&mut self) -> PResult<Vec<AstNode>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.at(")") {
            loop {
                let mut arg = self.parse_expr()?;
                arg.role = Role::Argument;
                args.push(arg);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn parse_primary(&mut self) -> PResult<AstNode> {
        let start = self.cur().start;
        let tok = self.cur().clone();
        match tok.kind {
            TokKind::IntLit | TokKind::FloatLit => {
                self.bump();
                return Ok(AstNode::leaf(NodeKind::NumberLiteral, tok.text, Span::new(tok.start, tok.end)));
            }
            TokKind::StringLit => {
                self.bump();
                return Ok(AstNode::leaf(NodeKind::StringLiteral, tok.text, Span::new(tok.start, tok.end)));
            }
            TokKind::CharLit => {
                self.bump();
                return Ok(AstNode::leaf(NodeKind::CharacterLiteral, tok.text, Span::new(tok.start, tok.end)));
            }
            _ => {}
        }

        match tok.text.as_str() {
            "true" | "false" => {
                self.bump();
                return Ok(AstNode::leaf(NodeKind::BooleanLiteral, tok.text, Span::new(tok.start, tok.end)));
            }
            "null" => {
                self.bump();
                return Ok(AstNode::leaf(NodeKind::NullLiteral, tok.text, Span::new(tok.start, tok.end)));
            }
            "this" => {
                self.bump();
                return Ok(AstNode::new(NodeKind::ThisExpression, Span::new(tok.start, tok.end)));
            }
            "super" => {
                self.bump();
                if self.at("(") {
                    let mut node = AstNode::new(NodeKind::SuperConstructorInvocation, Span::default());
                    for arg in self.parse_args()? {
                        node.push(arg);
                    }
                    node.span = self.span_from(start);
                    return Ok(node);
                }
                self.expect(".")?;
                let name = self.expect_ident()?;
                let leaf = AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end));
                if self.at("(") {
                    let mut node = AstNode::new(NodeKind::SuperMethodInvocation, Span::default());
                    node.push_with_role(leaf, Role::MethodName);
                    for arg in self.parse_args()? {
                        node.push(arg);
                    }
                    node.span = self.span_from(start);
                    return Ok(node);
                }
                let mut node = AstNode::new(NodeKind::SuperFieldAccess, self.span_from(start));
                node.push(leaf);
                return Ok(node);
            }
            "new" => return self.parse_creation(),
            "switch" => return Err(self.unsupported("switch expression")),
            "(" => {
                if let Some(lambda) = self.try_parse_lambda()? {
                    return Ok(lambda);
                }
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(")")?;
                let mut node = AstNode::new(NodeKind::ParenthesizedExpression, self.span_from(start));
                node.push(inner);
                return Ok(node);
            }
            _ => {}
        }

        if PRIMITIVES.contains(&tok.text.as_str()) || tok.text == "void" {
            // `int.class`, `long[].class`
            self.bump();
            let mut ty = AstNode::leaf(NodeKind::PrimitiveType, tok.text, Span::new(tok.start, tok.end));
            while self.at("[") && self.nth(1).is("]") {
                self.bump();
                self.bump();
                let mut arr = AstNode::new(NodeKind::ArrayType, self.span_from(start));
                arr.push(ty);
                ty = arr;
            }
            self.expect(".")?;
            self.expect("class")?;
            let mut node = AstNode::new(NodeKind::TypeLiteral, self.span_from(start));
            node.push(ty);
            return Ok(node);
        }

        if tok.kind == TokKind::Ident {
            // single-parameter lambda shorthand
            if self.nth(1).is("->") {
                self.bump();
                self.bump();
                let mut frag = AstNode::new(NodeKind::VariableDeclarationFragment, Span::new(tok.start, tok.end));
                frag.push(AstNode::leaf(NodeKind::SimpleName, tok.text, Span::new(tok.start, tok.end)));
                let mut lambda = AstNode::new(NodeKind::LambdaExpression, Span::default());
                lambda.push(frag);
                lambda.push(self.parse_lambda_body()?);
                lambda.span = self.span_from(start);
                return Ok(lambda);
            }
            // method invocation without receiver, or a name
            if self.nth(1).is("(") {
                let name = self.bump();
                let mut inv = AstNode::new(NodeKind::MethodInvocation, Span::default());
                inv.push_with_role(
                    AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)),
                    Role::MethodName,
                );
                for arg in self.parse_args()? {
                    inv.push(arg);
                }
                inv.span = self.span_from(start);
                return Ok(inv);
            }
            let name = self.bump();
            return Ok(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
        }

        Err(self.err_here(format!("expected expression, found `{}`", self.cur_desc())))
    }

    fn parse_creation(&mut self) -> PResult<AstNode> {
        let start = self.expect("new")?.start;
        let base = if PRIMITIVES.contains(&self.cur().text.as_str()) {
            let tok = self.bump();
            AstNode::leaf(NodeKind::PrimitiveType, tok.text, Span::new(tok.start, tok.end))
        } else {
            self.parse_class_type()?
        };

        if self.at("[") {
            let mut node = AstNode::new(NodeKind::ArrayCreation, Span::default());
            let mut arr = AstNode::new(NodeKind::ArrayType, base.span);
            arr.push(base);
            while self.at("[") {
                self.bump();
                if !self.at("]") {
                    node.push(self.parse_expr()?);
                }
                self.expect("]")?;
            }
            node.children.insert(0, arr);
            if self.at("{") {
                node.push(self.parse_array_initializer()?);
            }
            node.span = self.span_from(start);
            return Ok(node);
        }

        let mut node = AstNode::new(NodeKind::ClassInstanceCreation, Span::default());
        node.push(base);
        for arg in self.parse_args()? {
            node.push(arg);
        }
        if self.at("{") {
            node.push(self.parse_anonymous_body()?);
        }
        node.span = self.span_from(start);
        Ok(node)
    }

    fn parse_anonymous_body(&mut self) -> PResult<AstNode> {
        let start = self.expect("{")?.start;
        let mut body = AstNode::new(NodeKind::AnonymousClassDeclaration, Span::default());
        while !self.at("}") && !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            body.push(self.parse_member()?);
        }
        self.expect("}")?;
        body.span = self.span_from(start);
        Ok(body)
    }

    fn parse_array_initializer(&mut self) -> PResult<AstNode> {
        let start = self.expect("{")?.start;
        let mut node = AstNode::new(NodeKind::ArrayInitializer, Span::default());
        while !self.at("}") && !self.at_eof() {
            if self.at("{") {
                node.push(self.parse_array_initializer()?);
            } else {
                node.push(self.parse_expr()?);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        node.span = self.span_from(start);
        Ok(node)
    }

    /// Parenthesized lambda parameter list, with rollback when the parens
    /// turn out to be a cast or grouping.
    fn try_parse_lambda(&mut self) -> PResult<Option<AstNode>> {
        let save = self.pos;
        let start = self.cur().start;
        self.bump(); // (
        let mut params: Vec<AstNode> = Vec::new();

        if self.eat(")") {
            if !self.at("->") {
                self.pos = save;
                return Ok(None);
            }
        } else {
            // try inferred parameters: ident (, ident)*
            let inferred_ok = loop {
                if !self.at_ident() {
                    break false;
                }
                let name = self.bump();
                let mut frag = AstNode::new(
                    NodeKind::VariableDeclarationFragment,
                    Span::new(name.start, name.end),
                );
                frag.push(AstNode::leaf(NodeKind::SimpleName, name.text, Span::new(name.start, name.end)));
                params.push(frag);
                if self.eat(",") {
                    continue;
                }
                break self.at(")") && self.nth(1).is("->");
            };
            if inferred_ok {
                self.bump(); // )
            } else {
                // try typed parameters
                self.pos = save;
                self.bump(); // (
                params.clear();
                let typed_ok = loop {
                    let Ok(param) = self.parse_parameter() else {
                        break false;
                    };
                    params.push(param);
                    if self.eat(",") {
                        continue;
                    }
                    break self.at(")") && self.nth(1).is("->");
                };
                if !typed_ok {
                    self.pos = save;
                    return Ok(None);
                }
                self.bump(); // )
            }
            if !self.at("->") {
                self.pos = save;
                return Ok(None);
            }
        }
        self.expect("->")?;
        let mut lambda = AstNode::new(NodeKind::LambdaExpression, Span::default());
        for p in params {
            lambda.push(p);
        }
        lambda.push(self.parse_lambda_body()?);
        lambda.span = self.span_from(start);
        Ok(Some(lambda))
    }

    fn parse_lambda_body(&mut self) -> PResult<AstNode> {
        if self.at("{") {
            self.parse_block()
        } else {
            self.parse_expr()
        }
    }
}
