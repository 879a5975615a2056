//! Recursive-descent parser.
//!
//! Grammar summary (braces are mandatory on every block):
//!
//! ```text
//! file     := class*
//! class    := "class" IDENT "{" member* "}"
//! member   := ("@" IDENT)* "static"? type IDENT ( "(" params ")" block | ("=" expr)? ";" )
//! type     := "int" | "bool" | "string" | "void" | "list" "<" type ">" | IDENT
//! stmt     := type IDENT "=" expr ";" | place "=" expr ";" | "if" "(" expr ")" block ("else" (block | if))?
//!           | "while" "(" expr ")" block | "return" expr? ";" | "throw" expr ";"
//!           | assertX "(" args ")" ";" | expr ";"
//! ```

use std::collections::BTreeSet;

use super::ast::*;
use super::diag::{DiagCode, Diagnostic};
use super::lexer::{tokenize, Kw, Tok, Token};

const MAX_DEPTH: usize = 200;

pub struct Parser<'a> {
    path: &'a str,
    toks: Vec<Token>,
    pos: usize,
    next_id: &'a mut NodeId,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

/// Parses every class in `src` without type checking. Node ids are drawn from
/// `next_id`, which is advanced past the last id used.
pub fn parse_classes(path: &str, src: &str, next_id: &mut NodeId) -> Result<Vec<ClassDecl>, Diagnostic> {
    let toks = tokenize(src).map_err(|e| Diagnostic::new(path, e.span.line, DiagCode::ParseError, e.message))?;
    let mut p = Parser { path, toks, pos: 0, next_id, depth: 0 };
    let mut classes = Vec::new();
    while !p.at_eof() {
        classes.push(p.class_decl()?);
    }
    Ok(classes)
}

impl Parser<'_> {
    fn fresh_id(&mut self) -> NodeId {
        let id = *self.next_id;
        *self.next_id += 1;
        id
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn peek_span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::new(self.path, self.peek_span().line, DiagCode::ParseError, message))
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Kw(k) => format!("keyword `{}`", format!("{k:?}").to_lowercase()),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.is_sym(sym) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, sym: &str) -> PResult<()> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            self.error(format!("expected `{sym}`, found {}", Self::describe(self.peek())))
        }
    }

    fn is_kw(&self, kw: Kw) -> bool {
        matches!(self.peek(), Tok::Kw(k) if *k == kw)
    }

    fn eat_kw(&mut self, kw: Kw) -> bool {
        if self.is_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => self.error(format!("expected identifier, found {}", Self::describe(&other))),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error("nesting too deep");
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let class_span = self.peek_span();
        if !self.eat_kw(Kw::Class) {
            return self.error(format!("expected `class`, found {}", Self::describe(self.peek())));
        }
        let name = self.expect_ident()?;
        self.expect_sym("{")?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.eat_sym("}") {
            if self.at_eof() {
                return self.error("unexpected end of input in class body");
            }
            let mut annotations = BTreeSet::new();
            while self.eat_sym("@") {
                annotations.insert(self.expect_ident()?);
            }
            let is_static = self.eat_kw(Kw::Static);
            let ty = self.type_name(true)?;
            let span = self.peek_span();
            let member = self.expect_ident()?;
            if self.eat_sym("(") {
                let params = self.params()?;
                let body = self.block()?;
                methods.push(MethodDecl { name: member, params, ret: ty, is_static, annotations, body, span });
            } else {
                if !annotations.is_empty() {
                    return self.error("annotations are only allowed on methods");
                }
                if ty == TypeName::Unit {
                    return self.error("fields cannot have type `void`");
                }
                let init = if self.eat_sym("=") { Some(self.expr()?) } else { None };
                self.expect_sym(";")?;
                fields.push(FieldDecl { name: member, ty, is_static, init, span });
            }
        }
        Ok(ClassDecl { name, fields, methods, span: class_span })
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        let mut params = Vec::new();
        if self.eat_sym(")") {
            return Ok(params);
        }
        loop {
            let ty = self.type_name(false)?;
            let name = self.expect_ident()?;
            params.push(Param { name, ty });
            if self.eat_sym(")") {
                return Ok(params);
            }
            self.expect_sym(",")?;
        }
    }

    fn type_name(&mut self, allow_void: bool) -> PResult<TypeName> {
        self.enter()?;
        let ty = match self.peek().clone() {
            Tok::Kw(Kw::Int) => TypeName::Int,
            Tok::Kw(Kw::Bool) => TypeName::Bool,
            Tok::Kw(Kw::String) => TypeName::Str,
            Tok::Kw(Kw::Void) if allow_void => TypeName::Unit,
            Tok::Kw(Kw::List) => {
                self.advance();
                self.expect_sym("<")?;
                let inner = self.type_name(false)?;
                self.expect_sym(">")?;
                self.leave();
                return Ok(TypeName::list_of(inner));
            }
            Tok::Ident(name) => TypeName::Class(name),
            other => return self.error(format!("expected type, found {}", Self::describe(&other))),
        };
        self.advance();
        self.leave();
        Ok(ty)
    }

    /// Whether the upcoming tokens start a local variable declaration.
    fn at_var_decl(&self) -> bool {
        match self.peek() {
            Tok::Kw(Kw::Int | Kw::Bool | Kw::String | Kw::List) => true,
            Tok::Ident(_) => matches!(self.peek_at(1), Tok::Ident(_)),
            _ => false,
        }
    }

    fn block(&mut self) -> PResult<Block> {
        self.enter()?;
        self.expect_sym("{")?;
        let mut stmts = Vec::new();
        while !self.eat_sym("}") {
            if self.at_eof() {
                return self.error("unexpected end of input in block");
            }
            stmts.push(self.stmt()?);
        }
        self.leave();
        Ok(Block { stmts })
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let span = self.peek_span();
        let id = self.fresh_id();
        let kind = if self.at_var_decl() {
            let ty = self.type_name(false)?;
            let name = self.expect_ident()?;
            self.expect_sym("=")?;
            let init = self.expr()?;
            self.expect_sym(";")?;
            StmtKind::VarDecl { ty, name, init }
        } else if self.eat_kw(Kw::If) {
            return self.if_rest(id, span);
        } else if self.eat_kw(Kw::While) {
            self.expect_sym("(")?;
            let cond = self.expr()?;
            self.expect_sym(")")?;
            let body = self.block()?;
            StmtKind::While { cond, body }
        } else if self.eat_kw(Kw::Return) {
            let value = if self.is_sym(";") { None } else { Some(self.expr()?) };
            self.expect_sym(";")?;
            StmtKind::Return(value)
        } else if self.eat_kw(Kw::Throw) {
            let value = self.expr()?;
            self.expect_sym(";")?;
            StmtKind::Throw(value)
        } else if let (Tok::Ident(name), Tok::Sym("(")) = (self.peek().clone(), self.peek_at(1).clone()) {
            if let Some(kind) = AssertKind::from_builtin_name(&name) {
                self.advance();
                self.advance();
                let args = self.args()?;
                self.expect_sym(";")?;
                StmtKind::Assert { kind, args }
            } else {
                self.expr_or_assign()?
            }
        } else {
            self.expr_or_assign()?
        };
        Ok(Stmt { id, span, kind })
    }

    fn if_rest(&mut self, id: NodeId, span: Span) -> PResult<Stmt> {
        self.expect_sym("(")?;
        let cond = self.expr()?;
        self.expect_sym(")")?;
        let then_block = self.block()?;
        let else_block = if self.eat_kw(Kw::Else) {
            if self.is_kw(Kw::If) {
                self.enter()?;
                let inner_span = self.peek_span();
                self.advance();
                let inner_id = self.fresh_id();
                let inner = self.if_rest(inner_id, inner_span)?;
                self.leave();
                Some(Block { stmts: vec![inner] })
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        Ok(Stmt { id, span, kind: StmtKind::If { cond, then_block, else_block } })
    }

    fn expr_or_assign(&mut self) -> PResult<StmtKind> {
        let lhs = self.expr()?;
        if self.eat_sym("=") {
            if !matches!(lhs.kind, ExprKind::Ident(_) | ExprKind::Field { .. }) {
                return self.error("invalid assignment target");
            }
            let value = self.expr()?;
            self.expect_sym(";")?;
            Ok(StmtKind::Assign { target: lhs, value })
        } else {
            self.expect_sym(";")?;
            Ok(StmtKind::Expr(lhs))
        }
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        let mut args = Vec::new();
        if self.eat_sym(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_sym(")") {
                return Ok(args);
            }
            self.expect_sym(",")?;
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinOp> {
        let Tok::Sym(s) = self.peek() else { return None };
        BinOp::ALL.into_iter().find(|op| op.symbol() == *s)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        self.enter()?;
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            let span = self.peek_span();
            self.advance();
            let rhs = self.binary(prec + 1)?;
            let id = self.fresh_id();
            lhs = Expr { id, span, kind: ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) } };
        }
        self.leave();
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let span = self.peek_span();
        let result = if self.is_sym("-") {
            self.advance();
            if let Tok::Int(mag) = self.peek().clone() {
                // `-` directly before a literal folds into a negative literal.
                self.advance();
                let value = if mag == i64::MIN.unsigned_abs() {
                    i64::MIN
                } else if mag <= i64::MAX as u64 {
                    -(mag as i64)
                } else {
                    return self.error("integer literal too large");
                };
                let lit = Expr { id: self.fresh_id(), span, kind: ExprKind::Int(value) };
                self.postfix(lit)?
            } else {
                let operand = self.unary()?;
                Expr { id: self.fresh_id(), span, kind: ExprKind::Unary { op: UnaryOp::Neg, operand: Box::new(operand) } }
            }
        } else if self.eat_sym("!") {
            let operand = self.unary()?;
            Expr { id: self.fresh_id(), span, kind: ExprKind::Unary { op: UnaryOp::Not, operand: Box::new(operand) } }
        } else {
            let primary = self.primary()?;
            self.postfix(primary)?
        };
        self.leave();
        Ok(result)
    }

    fn postfix(&mut self, mut expr: Expr) -> PResult<Expr> {
        loop {
            let span = self.peek_span();
            if self.eat_sym(".") {
                let name = self.expect_ident()?;
                if self.eat_sym("(") {
                    let args = self.args()?;
                    let id = self.fresh_id();
                    expr = Expr { id, span, kind: ExprKind::Call { receiver: Some(Box::new(expr)), name, args } };
                } else {
                    let id = self.fresh_id();
                    expr = Expr { id, span, kind: ExprKind::Field { target: Box::new(expr), name } };
                }
            } else if self.eat_sym("[") {
                let index = self.expr()?;
                self.expect_sym("]")?;
                let id = self.fresh_id();
                expr = Expr { id, span, kind: ExprKind::Index { target: Box::new(expr), index: Box::new(index) } };
            } else {
                return Ok(expr);
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.peek_span();
        let tok = self.advance().tok;
        let kind = match tok {
            Tok::Int(v) => {
                if v > i64::MAX as u64 {
                    return Err(Diagnostic::new(self.path, span.line, DiagCode::ParseError, "integer literal too large"));
                }
                ExprKind::Int(v as i64)
            }
            Tok::Str(s) => ExprKind::Str(s),
            Tok::Kw(Kw::True) => ExprKind::Bool(true),
            Tok::Kw(Kw::False) => ExprKind::Bool(false),
            Tok::Kw(Kw::Null) => ExprKind::Null,
            Tok::Kw(Kw::This) => ExprKind::This,
            Tok::Kw(Kw::New) => {
                let class = self.expect_ident()?;
                self.expect_sym("(")?;
                self.expect_sym(")")?;
                ExprKind::New { class }
            }
            Tok::Ident(name) => {
                if self.eat_sym("(") {
                    let args = self.args()?;
                    ExprKind::Call { receiver: None, name, args }
                } else {
                    ExprKind::Ident(name)
                }
            }
            Tok::Sym("(") => {
                let inner = self.expr()?;
                self.expect_sym(")")?;
                return Ok(inner);
            }
            Tok::Sym("[") => {
                let mut items = Vec::new();
                if !self.eat_sym("]") {
                    loop {
                        items.push(self.expr()?);
                        if self.eat_sym("]") {
                            break;
                        }
                        self.expect_sym(",")?;
                    }
                }
                ExprKind::List(items)
            }
            other => {
                return Err(Diagnostic::new(
                    self.path,
                    span.line,
                    DiagCode::ParseError,
                    format!("expected expression, found {}", Self::describe(&other)),
                ))
            }
        };
        Ok(Expr { id: self.fresh_id(), span, kind })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_one(src: &str) -> ClassDecl {
        let mut id = 0;
        parse_classes("t.mini", src, &mut id).unwrap().remove(0)
    }

    fn body_expr(src_expr: &str) -> Expr {
        let class = parse_one(&format!("class A {{ void f() {{ {src_expr}; }} }}"));
        match &class.methods[0].body.stmts[0].kind {
            StmtKind::Expr(e) => e.clone(),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_class() {
        let c = parse_one("class A { }");
        assert_eq!(c.name, "A");
        assert!(c.fields.is_empty() && c.methods.is_empty());
    }

    #[test]
    fn precedence_and_associativity() {
        let e = body_expr("a - b - c * d");
        let ExprKind::Binary { op: BinOp::Sub, lhs, rhs } = e.kind else { panic!() };
        assert!(matches!(lhs.kind, ExprKind::Binary { op: BinOp::Sub, .. }));
        assert!(matches!(rhs.kind, ExprKind::Binary { op: BinOp::Mul, .. }));
    }

    #[test]
    fn negative_literal_folds_only_in_unary_position() {
        assert_eq!(body_expr("-5").kind, ExprKind::Int(-5));
        assert!(matches!(body_expr("a - 5").kind, ExprKind::Binary { op: BinOp::Sub, .. }));
        assert!(matches!(body_expr("-(5)").kind, ExprKind::Unary { op: UnaryOp::Neg, .. }));
        assert_eq!(body_expr("-9223372036854775808").kind, ExprKind::Int(i64::MIN));
    }

    #[test]
    fn members_and_annotations() {
        let c = parse_one(
            "class T { static int n = 1; list<list<int>> xs; @Test void t() { assertEquals(1, n); } }",
        );
        assert_eq!(c.fields.len(), 2);
        assert_eq!(c.fields[1].ty, TypeName::list_of(TypeName::list_of(TypeName::Int)));
        assert!(c.methods[0].is_test());
        assert!(matches!(c.methods[0].body.stmts[0].kind, StmtKind::Assert { kind: AssertKind::Equals, .. }));
    }

    #[test]
    fn else_if_chain() {
        let c = parse_one("class A { int f(int x) { if (x < 0) { return 0; } else if (x == 0) { return 1; } else { return 2; } } }");
        let StmtKind::If { else_block: Some(b), .. } = &c.methods[0].body.stmts[0].kind else { panic!() };
        assert!(matches!(b.stmts[0].kind, StmtKind::If { else_block: Some(_), .. }));
    }

    #[test]
    fn errors_carry_line() {
        let mut id = 0;
        let err = parse_classes("x.mini", "class A {\n void f() {\n return 1 +; } }", &mut id).unwrap_err();
        assert_eq!(err.code, DiagCode::ParseError);
        assert_eq!(err.line, 3);
        let err = parse_classes("x.mini", "class A { void f() { 1 = 2; } }", &mut id).unwrap_err();
        assert!(err.message.contains("assignment target"));
    }

    #[test]
    fn depth_limit_is_a_diagnostic() {
        let src = format!("class A {{ int f() {{ return {}1{}; }} }}", "(".repeat(500), ")".repeat(500));
        let mut id = 0;
        let err = parse_classes("d.mini", &src, &mut id).unwrap_err();
        assert!(err.message.contains("nesting"));
    }
}
