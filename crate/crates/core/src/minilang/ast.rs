//! Syntax tree for the mini-language.
//!
//! Every statement and expression carries a [`NodeId`] and a [`Span`]. Both
//! are ignored by `PartialEq`, so `==` on any AST value is structural
//! equality: two trees compare equal when they have the same shape, names and
//! literals regardless of where they were parsed from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::typeck::TypeInfo;

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

/// Serialized as its source spelling (`int`, `list<string>`, `SecretKey`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, )]
pub enum TypeName {
    Int,
    Bool,
    Str,
    Unit,
    List(Box<TypeName>),
    Class(String),
}

impl TypeName {
    pub fn list_of(inner: TypeName) -> Self {
        TypeName::List(Box::new(inner))
    }

    /// Types whose values may be `null`.
    pub fn is_reference(&self) -> bool {
        matches!(self, TypeName::Str | TypeName::List(_) | TypeName::Class(_))
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeName::Int => f.write_str("int"),
            TypeName::Bool => f.write_str("bool"),
            TypeName::Str => f.write_str("string"),
            TypeName::Unit => f.write_str("void"),
            TypeName::List(inner) => write!(f, "list<{inner}>"),
            TypeName::Class(name) => f.write_str(name),
        }
    }
}

impl std::str::FromStr for TypeName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        Ok(match s {
            "int" => TypeName::Int,
            "bool" => TypeName::Bool,
            "string" => TypeName::Str,
            "void" => TypeName::Unit,
            _ => match s.strip_prefix("list<").and_then(|r| r.strip_suffix('>')) {
                Some(inner) => TypeName::list_of(inner.parse()?),
                None if !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_') => TypeName::Class(s.to_string()),
                None => return Err(format!("not a type: {s:?}")),
            },
        })
    }
}

impl Serialize for TypeName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TypeName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Identifies one method: owning class, name and parameter types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodRef {
    pub class: String,
    pub name: String,
    pub params: Vec<TypeName>,
}

impl MethodRef {
    pub fn new(class: impl Into<String>, name: impl Into<String>, params: Vec<TypeName>) -> Self {
        MethodRef { class: class.into(), name: name.into(), params }
    }

    /// `Class.method` without the parameter list.
    pub fn qualified_name(&self) -> String {
        format!("{}.{}", self.class, self.name)
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}(", self.class, self.name)?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceOrigin {
    pub path: String,
    pub line: u32,
}

/// A parsed and type-checked set of classes.
///
/// Construct through [`Program::new`] (or the parser entry points), which
/// runs the type checker; a `Program` value is therefore always well typed.
#[derive(Debug, Clone)]
pub struct Program {
    pub classes: Vec<ClassDecl>,
    /// Declaration key (`Class` or `Class.method`) to where it was declared.
    pub origins: BTreeMap<String, SourceOrigin>,
    pub(crate) info: Arc<TypeInfo>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes
    }
}

impl Program {
    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn method(&self, mref: &MethodRef) -> Option<&MethodDecl> {
        self.class(&mref.class)?.methods.iter().find(|m| m.method_ref(&mref.class) == *mref)
    }

    pub fn type_info(&self) -> &TypeInfo {
        &self.info
    }

    /// All methods of all classes, in declaration order.
    pub fn method_refs(&self) -> Vec<MethodRef> {
        self.classes
            .iter()
            .flat_map(|c| c.methods.iter().map(move |m| m.method_ref(&c.name)))
            .collect()
    }

    pub fn path_of_class(&self, class: &str) -> &str {
        self.origins.get(class).map(|o| o.path.as_str()).unwrap_or("<unknown>")
    }
}

#[derive(Debug, Clone)]
pub struct ClassDecl {
    pub name: String,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub span: Span,
}

impl PartialEq for ClassDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.fields == other.fields && self.methods == other.methods
    }
}

impl ClassDecl {
    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn methods_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a MethodDecl> + 'a {
        self.methods.iter().filter(move |m| m.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct FieldDecl {
    pub name: String,
    pub ty: TypeName,
    pub is_static: bool,
    pub init: Option<Expr>,
    pub span: Span,
}

impl PartialEq for FieldDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.ty == other.ty && self.is_static == other.is_static && self.init == other.init
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: TypeName,
}

#[derive(Debug, Clone)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub ret: TypeName,
    pub is_static: bool,
    pub annotations: BTreeSet<String>,
    pub body: Block,
    pub span: Span,
}

impl PartialEq for MethodDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.params == other.params
            && self.ret == other.ret
            && self.is_static == other.is_static
            && self.annotations == other.annotations
            && self.body == other.body
    }
}

impl MethodDecl {
    pub fn method_ref(&self, class: &str) -> MethodRef {
        MethodRef::new(class, self.name.clone(), self.params.iter().map(|p| p.ty.clone()).collect())
    }

    pub fn is_test(&self) -> bool {
        self.annotations.contains("Test")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Block {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub id: NodeId,
    pub span: Span,
    pub kind: StmtKind,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    VarDecl { ty: TypeName, name: String, init: Expr },
    /// Target is an identifier or a field access.
    Assign { target: Expr, value: Expr },
    If { cond: Expr, then_block: Block, else_block: Option<Block> },
    While { cond: Expr, body: Block },
    Return(Option<Expr>),
    Expr(Expr),
    Throw(Expr),
    Assert { kind: AssertKind, args: Vec<Expr> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AssertKind {
    Equals,
    NotEquals,
    True,
    False,
}

impl AssertKind {
    pub const ALL: [AssertKind; 4] =
        [AssertKind::Equals, AssertKind::NotEquals, AssertKind::True, AssertKind::False];

    pub fn builtin_name(self) -> &'static str {
        match self {
            AssertKind::Equals => "assertEquals",
            AssertKind::NotEquals => "assertNotEquals",
            AssertKind::True => "assertTrue",
            AssertKind::False => "assertFalse",
        }
    }

    pub fn from_builtin_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.builtin_name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            AssertKind::Equals | AssertKind::NotEquals => 2,
            AssertKind::True | AssertKind::False => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub id: NodeId,
    pub span: Span,
    pub kind: ExprKind,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Str(String),
    Null,
    List(Vec<Expr>),
    Ident(String),
    This,
    Field { target: Box<Expr>, name: String },
    Unary { op: UnaryOp, operand: Box<Expr> },
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    /// `name(args)` when `receiver` is `None`, otherwise `receiver.name(args)`.
    Call { receiver: Option<Box<Expr>>, name: String, args: Vec<Expr> },
    New { class: String },
    Index { target: Box<Expr>, index: Box<Expr> },
}

impl ExprKind {
    pub fn is_literal(&self) -> bool {
        match self {
            ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Str(_) | ExprKind::Null => true,
            ExprKind::List(items) => items.iter().all(|e| e.kind.is_literal()),
            ExprKind::Unary { operand, .. } => operand.kind.is_literal(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnaryOp {
    Neg,
    Not,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Not => "!",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub const ALL: [BinOp; 13] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Rem,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::And,
        BinOp::Or,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter. All levels are left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 6,
        }
    }
}

/// A test class: an ordinary class whose `@Test` methods are executed by the
/// test runner. Candidate, refined and amplified tests all use this type.
#[derive(Debug, Clone, PartialEq)]
pub struct TestClass {
    pub decl: ClassDecl,
}

impl TestClass {
    pub fn new(decl: ClassDecl) -> Self {
        TestClass { decl }
    }

    pub fn name(&self) -> &str {
        &self.decl.name
    }

    pub fn test_methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.decl.methods.iter().filter(|m| m.is_test())
    }
}

/// Calls `f` on every statement reachable from `block`, outer statements first.
pub fn walk_stmts<'a>(block: &'a Block, f: &mut dyn FnMut(&'a Stmt)) {
    for stmt in &block.stmts {
        f(stmt);
        match &stmt.kind {
            StmtKind::If { then_block, else_block, .. } => {
                walk_stmts(then_block, f);
                if let Some(e) = else_block {
                    walk_stmts(e, f);
                }
            }
            StmtKind::While { body, .. } => walk_stmts(body, f),
            _ => {}
        }
    }
}

/// Expressions directly owned by a statement (not those of nested blocks).
pub fn stmt_exprs(stmt: &Stmt) -> Vec<&Expr> {
    match &stmt.kind {
        StmtKind::VarDecl { init, .. } => vec![init],
        StmtKind::Assign { target, value } => vec![target, value],
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => vec![cond],
        StmtKind::Return(e) => e.iter().collect(),
        StmtKind::Expr(e) | StmtKind::Throw(e) => vec![e],
        StmtKind::Assert { args, .. } => args.iter().collect(),
    }
}

/// Pre-order traversal of an expression tree.
pub fn walk_expr<'a>(expr: &'a Expr, f: &mut dyn FnMut(&'a Expr)) {
    f(expr);
    match &expr.kind {
        ExprKind::List(items) => items.iter().for_each(|e| walk_expr(e, f)),
        ExprKind::Field { target, .. } => walk_expr(target, f),
        ExprKind::Unary { operand, .. } => walk_expr(operand, f),
        ExprKind::Binary { lhs, rhs, .. } => {
            walk_expr(lhs, f);
            walk_expr(rhs, f);
        }
        ExprKind::Call { receiver, args, .. } => {
            if let Some(r) = receiver {
                walk_expr(r, f);
            }
            args.iter().for_each(|e| walk_expr(e, f));
        }
        ExprKind::Index { target, index } => {
            walk_expr(target, f);
            walk_expr(index, f);
        }
        ExprKind::Int(_)
        | ExprKind::Bool(_)
        | ExprKind::Str(_)
        | ExprKind::Null
        | ExprKind::Ident(_)
        | ExprKind::This
        | ExprKind::New { .. } => {}
    }
}

/// Every expression in a block, including nested blocks, in source order.
pub fn walk_block_exprs<'a>(block: &'a Block, f: &mut dyn FnMut(&'a Expr)) {
    walk_stmts(block, &mut |s| {
        for e in stmt_exprs(s) {
            walk_expr(e, f);
        }
    });
}
