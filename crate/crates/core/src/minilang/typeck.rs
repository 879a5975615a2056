//! Name resolution and type checking.
//!
//! The checker fills a [`TypeInfo`] side table keyed by [`NodeId`]: what each
//! call, identifier and field access resolves to. Static analyses and the
//! interpreter read resolution from here instead of re-deriving it.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::diag::{DiagCode, Diagnostic};

/// Built-in free functions (assertions are statements and listed separately).
pub const BUILTINS: &[&str] = &[
    "print",
    "len",
    "charCode",
    "fromCharCodes",
    "substring",
    "append",
    "contains",
    "equals",
    "str",
    "reverse",
    "abs",
    "min",
    "max",
];

pub fn is_builtin(name: &str) -> bool {
    BUILTINS.contains(&name) || AssertKind::from_builtin_name(name).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldRef {
    pub class: String,
    pub name: String,
}

impl FieldRef {
    pub fn new(class: impl Into<String>, name: impl Into<String>) -> Self {
        FieldRef { class: class.into(), name: name.into() }
    }
}

impl std::fmt::Display for FieldRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.class, self.name)
    }
}

/// What a call site resolves to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Callee {
    Method(MethodRef),
    Builtin(String),
    Constructor(String),
    Unresolved(String),
}

impl std::fmt::Display for Callee {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Callee::Method(m) => write!(f, "{m}"),
            Callee::Builtin(name) => write!(f, "builtin.{name}"),
            Callee::Constructor(class) => write!(f, "{class}.new"),
            Callee::Unresolved(name) => write!(f, "UNRESOLVED.{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentRes {
    Local,
    Field(FieldRef),
    Class(String),
}

#[derive(Debug, Clone, Default)]
pub struct TypeInfo {
    pub calls: HashMap<NodeId, Callee>,
    pub idents: HashMap<NodeId, IdentRes>,
    /// Field-access expressions (and identifiers naming fields) to the field.
    pub fields: HashMap<NodeId, FieldRef>,
    pub types: HashMap<NodeId, TypeName>,
}

#[derive(Debug, Clone, PartialEq)]
enum Ty {
    T(TypeName),
    Null,
    EmptyList,
    ClassRef(String),
    Error,
}

impl Ty {
    fn describe(&self) -> String {
        match self {
            Ty::T(t) => t.to_string(),
            Ty::Null => "null".into(),
            Ty::EmptyList => "list<?>".into(),
            Ty::ClassRef(c) => format!("class {c}"),
            Ty::Error => "<error>".into(),
        }
    }
}

fn assignable(from: &Ty, to: &TypeName) -> bool {
    match from {
        Ty::T(t) => t == to,
        Ty::Null => to.is_reference(),
        Ty::EmptyList => matches!(to, TypeName::List(_)),
        Ty::Error => true,
        Ty::ClassRef(_) => false,
    }
}

fn comparable(a: &Ty, b: &Ty) -> bool {
    match (a, b) {
        (Ty::Error, _) | (_, Ty::Error) => true,
        (Ty::ClassRef(_), _) | (_, Ty::ClassRef(_)) => false,
        (Ty::T(x), Ty::T(y)) => x == y,
        (Ty::Null, Ty::Null) => true,
        (Ty::Null, Ty::T(t)) | (Ty::T(t), Ty::Null) => t.is_reference(),
        (Ty::EmptyList, Ty::T(t)) | (Ty::T(t), Ty::EmptyList) => matches!(t, TypeName::List(_)),
        (Ty::EmptyList, Ty::EmptyList) | (Ty::EmptyList, Ty::Null) | (Ty::Null, Ty::EmptyList) => true,
    }
}

struct ClassTable<'a> {
    classes: HashMap<&'a str, &'a ClassDecl>,
}

impl<'a> ClassTable<'a> {
    fn field(&self, class: &str, name: &str) -> Option<&'a FieldDecl> {
        self.classes.get(class)?.field(name)
    }
}

#[derive(Clone, Copy)]
struct Ctx<'a> {
    class: &'a ClassDecl,
    is_static: bool,
}

struct Checker<'a, 'p> {
    table: ClassTable<'a>,
    path: &'p dyn Fn(&str) -> String,
    cur_path: String,
    diags: Vec<Diagnostic>,
    info: TypeInfo,
    scopes: Vec<HashMap<String, TypeName>>,
    ret: TypeName,
}

/// Checks `to_check` against the visible classes `visible` (which must include
/// `to_check`). Returns the resolution table or the diagnostics found.
pub(crate) fn check_classes(
    visible: &[&ClassDecl],
    to_check: &[&ClassDecl],
    path: &dyn Fn(&str) -> String,
) -> Result<TypeInfo, Vec<Diagnostic>> {
    let mut checker = Checker {
        table: ClassTable { classes: HashMap::new() },
        path,
        cur_path: String::new(),
        diags: Vec::new(),
        info: TypeInfo::default(),
        scopes: Vec::new(),
        ret: TypeName::Unit,
    };
    for class in visible {
        if checker.table.classes.insert(class.name.as_str(), class).is_some() {
            let p = path(&class.name);
            checker.diags.push(Diagnostic::new(
                p,
                class.span.line,
                DiagCode::DuplicateDecl,
                format!("duplicate class `{}`", class.name),
            ));
        }
    }
    for class in to_check {
        checker.check_class(class);
    }
    if checker.diags.is_empty() {
        Ok(checker.info)
    } else {
        Err(checker.diags)
    }
}

/// Type-checks a whole program.
pub fn check_program_classes(
    classes: &[ClassDecl],
    path: &dyn Fn(&str) -> String,
) -> Result<TypeInfo, Vec<Diagnostic>> {
    let refs: Vec<&ClassDecl> = classes.iter().collect();
    check_classes(&refs, &refs, path)
}

/// Type-checks a test class against a program. The result covers only the
/// test class's own nodes.
pub fn check_test_class(program: &Program, test: &TestClass, path: &str) -> Result<TypeInfo, Vec<Diagnostic>> {
    let mut visible: Vec<&ClassDecl> = program.classes.iter().collect();
    visible.push(&test.decl);
    let test_name = test.decl.name.clone();
    let path_owned = path.to_string();
    let lookup = move |class: &str| {
        if class == test_name {
            path_owned.clone()
        } else {
            program.path_of_class(class).to_string()
        }
    };
    let info = check_classes(&visible, &[&test.decl], &lookup)?;
    let mut errors = Vec::new();
    for m in test.test_methods() {
        if !m.params.is_empty() || m.ret != TypeName::Unit {
            errors.push(Diagnostic::new(
                path,
                m.span.line,
                DiagCode::TypeMismatch,
                format!("@Test method `{}` must take no parameters and return void", m.name),
            ));
        }
    }
    if errors.is_empty() {
        Ok(info)
    } else {
        Err(errors)
    }
}

impl<'a> Checker<'a, '_> {
    fn err(&mut self, line: u32, code: DiagCode, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(self.cur_path.clone(), line, code, msg));
    }

    fn unresolved(&mut self, line: u32, what: &str, symbol: &str) {
        self.diags.push(Diagnostic::unresolved(self.cur_path.clone(), line, what, symbol));
    }

    fn check_type_exists(&mut self, ty: &TypeName, line: u32) {
        match ty {
            TypeName::Class(c) if !self.table.classes.contains_key(c.as_str()) => self.unresolved(line, "class", c),
            TypeName::List(inner) => self.check_type_exists(inner, line),
            _ => {}
        }
    }

    fn check_class(&mut self, class: &'a ClassDecl) {
        self.cur_path = (self.path)(&class.name);
        let mut seen_fields = BTreeSet::new();
        for f in &class.fields {
            if !seen_fields.insert(f.name.as_str()) {
                self.err(f.span.line, DiagCode::DuplicateDecl, format!("duplicate field `{}.{}`", class.name, f.name));
            }
            self.check_type_exists(&f.ty, f.span.line);
        }
        let mut seen_methods = BTreeSet::new();
        for m in &class.methods {
            let sig = m.method_ref(&class.name);
            if !seen_methods.insert(sig.clone()) {
                self.err(m.span.line, DiagCode::DuplicateDecl, format!("duplicate method `{sig}`"));
            }
            let mut seen_params = BTreeSet::new();
            for p in &m.params {
                if !seen_params.insert(p.name.as_str()) {
                    self.err(m.span.line, DiagCode::DuplicateDecl, format!("duplicate parameter `{}`", p.name));
                }
                self.check_type_exists(&p.ty, m.span.line);
            }
            self.check_type_exists(&m.ret, m.span.line);
        }

        for f in &class.fields {
            if let Some(init) = &f.init {
                self.scopes = vec![HashMap::new()];
                let ctx = Ctx { class, is_static: f.is_static };
                let ty = self.expr(init, ctx);
                if !assignable(&ty, &f.ty) {
                    self.err(
                        init.span.line,
                        DiagCode::TypeMismatch,
                        format!("field `{}` has type {} but initializer is {}", f.name, f.ty, ty.describe()),
                    );
                }
            }
        }
        for m in &class.methods {
            let mut scope = HashMap::new();
            for p in &m.params {
                scope.insert(p.name.clone(), p.ty.clone());
            }
            self.scopes = vec![scope];
            self.ret = m.ret.clone();
            let ctx = Ctx { class, is_static: m.is_static };
            self.block(&m.body, ctx);
        }
    }

    fn lookup_local(&self, name: &str) -> Option<&TypeName> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn block(&mut self, block: &Block, ctx: Ctx<'a>) {
        self.scopes.push(HashMap::new());
        for s in &block.stmts {
            self.stmt(s, ctx);
        }
        self.scopes.pop();
    }

    fn expect_bool(&mut self, e: &Expr, ctx: Ctx<'a>, what: &str) {
        let ty = self.expr(e, ctx);
        if !assignable(&ty, &TypeName::Bool) || ty == Ty::Null {
            self.err(e.span.line, DiagCode::TypeMismatch, format!("{what} must be bool, found {}", ty.describe()));
        }
    }

    fn stmt(&mut self, stmt: &Stmt, ctx: Ctx<'a>) {
        let line = stmt.span.line;
        match &stmt.kind {
            StmtKind::VarDecl { ty, name, init } => {
                self.check_type_exists(ty, line);
                if ty == &TypeName::Unit {
                    self.err(line, DiagCode::TypeMismatch, "variables cannot have type void");
                }
                let init_ty = self.expr(init, ctx);
                if !assignable(&init_ty, ty) {
                    self.err(
                        line,
                        DiagCode::TypeMismatch,
                        format!("cannot initialize `{name}` of type {ty} with {}", init_ty.describe()),
                    );
                }
                if self.lookup_local(name).is_some() {
                    self.err(line, DiagCode::DuplicateDecl, format!("variable `{name}` is already defined"));
                }
                self.scopes.last_mut().unwrap().insert(name.clone(), ty.clone());
            }
            StmtKind::Assign { target, value } => {
                let target_ty = match &target.kind {
                    ExprKind::Ident(_) | ExprKind::Field { .. } => self.expr(target, ctx),
                    _ => {
                        self.err(line, DiagCode::TypeMismatch, "invalid assignment target");
                        Ty::Error
                    }
                };
                let value_ty = self.expr(value, ctx);
                match &target_ty {
                    Ty::T(t) => {
                        if !assignable(&value_ty, t) {
                            self.err(
                                line,
                                DiagCode::TypeMismatch,
                                format!("cannot assign {} to {}", value_ty.describe(), t),
                            );
                        }
                    }
                    Ty::Error => {}
                    other => self.err(line, DiagCode::TypeMismatch, format!("cannot assign to {}", other.describe())),
                }
            }
            StmtKind::If { cond, then_block, else_block } => {
                self.expect_bool(cond, ctx, "condition");
                self.block(then_block, ctx);
                if let Some(b) = else_block {
                    self.block(b, ctx);
                }
            }
            StmtKind::While { cond, body } => {
                self.expect_bool(cond, ctx, "condition");
                self.block(body, ctx);
            }
            StmtKind::Return(value) => match (value, self.ret.clone()) {
                (None, TypeName::Unit) => {}
                (None, ret) => self.err(line, DiagCode::TypeMismatch, format!("missing return value of type {ret}")),
                (Some(e), TypeName::Unit) => {
                    self.expr(e, ctx);
                    self.err(line, DiagCode::TypeMismatch, "void method cannot return a value");
                }
                (Some(e), ret) => {
                    let ty = self.expr(e, ctx);
                    if !assignable(&ty, &ret) {
                        self.err(
                            line,
                            DiagCode::TypeMismatch,
                            format!("return type is {ret} but expression is {}", ty.describe()),
                        );
                    }
                }
            },
            StmtKind::Expr(e) => {
                let ty = self.expr(e, ctx);
                if let Ty::ClassRef(c) = ty {
                    self.err(line, DiagCode::TypeMismatch, format!("class `{c}` is not a value"));
                }
            }
            StmtKind::Throw(e) => {
                let ty = self.expr(e, ctx);
                if !matches!(ty, Ty::T(TypeName::Str) | Ty::Error) {
                    self.err(line, DiagCode::TypeMismatch, format!("throw expects a string, found {}", ty.describe()));
                }
            }
            StmtKind::Assert { kind, args } => {
                let tys: Vec<Ty> = args.iter().map(|a| self.expr(a, ctx)).collect();
                if tys.len() != kind.arity() {
                    self.err(
                        line,
                        DiagCode::TypeMismatch,
                        format!("{} expects {} arguments, found {}", kind.builtin_name(), kind.arity(), tys.len()),
                    );
                    return;
                }
                match kind {
                    AssertKind::Equals | AssertKind::NotEquals => {
                        if !comparable(&tys[0], &tys[1]) {
                            self.err(
                                line,
                                DiagCode::TypeMismatch,
                                format!("cannot compare {} with {}", tys[0].describe(), tys[1].describe()),
                            );
                        }
                    }
                    AssertKind::True | AssertKind::False => {
                        if !matches!(tys[0], Ty::T(TypeName::Bool) | Ty::Error) {
                            self.err(
                                line,
                                DiagCode::TypeMismatch,
                                format!("{} expects bool, found {}", kind.builtin_name(), tys[0].describe()),
                            );
                        }
                    }
                }
            }
        }
    }

    fn expr(&mut self, e: &Expr, ctx: Ctx<'a>) -> Ty {
        let ty = self.expr_inner(e, ctx);
        if let Ty::T(t) = &ty {
            self.info.types.insert(e.id, t.clone());
        }
        ty
    }

    fn value(&mut self, e: &Expr, ctx: Ctx<'a>) -> Ty {
        let ty = self.expr(e, ctx);
        if let Ty::ClassRef(c) = &ty {
            self.err(e.span.line, DiagCode::TypeMismatch, format!("class `{c}` is not a value"));
            return Ty::Error;
        }
        ty
    }

    fn expr_inner(&mut self, e: &Expr, ctx: Ctx<'a>) -> Ty {
        let line = e.span.line;
        match &e.kind {
            ExprKind::Int(_) => Ty::T(TypeName::Int),
            ExprKind::Bool(_) => Ty::T(TypeName::Bool),
            ExprKind::Str(_) => Ty::T(TypeName::Str),
            ExprKind::Null => Ty::Null,
            ExprKind::List(items) => {
                if items.is_empty() {
                    return Ty::EmptyList;
                }
                let tys: Vec<Ty> = items.iter().map(|i| self.value(i, ctx)).collect();
                let concrete = tys.iter().find_map(|t| match t {
                    Ty::T(t) => Some(t.clone()),
                    _ => None,
                });
                match concrete {
                    Some(elem) => {
                        if tys.iter().all(|t| assignable(t, &elem)) {
                            Ty::T(TypeName::list_of(elem))
                        } else {
                            self.err(line, DiagCode::TypeMismatch, "list literal elements have different types");
                            Ty::Error
                        }
                    }
                    None if tys.iter().any(|t| *t == Ty::Error) => Ty::Error,
                    None => {
                        self.err(line, DiagCode::TypeMismatch, "cannot infer list literal element type");
                        Ty::Error
                    }
                }
            }
            ExprKind::Ident(name) => {
                if let Some(t) = self.lookup_local(name) {
                    let t = t.clone();
                    self.info.idents.insert(e.id, IdentRes::Local);
                    return Ty::T(t);
                }
                if let Some(f) = ctx.class.field(name) {
                    if !f.is_static && ctx.is_static {
                        self.err(line, DiagCode::TypeMismatch, format!("instance field `{name}` used in static context"));
                        return Ty::Error;
                    }
                    let fref = FieldRef::new(ctx.class.name.clone(), name.clone());
                    self.info.idents.insert(e.id, IdentRes::Field(fref.clone()));
                    self.info.fields.insert(e.id, fref);
                    return Ty::T(f.ty.clone());
                }
                if self.table.classes.contains_key(name.as_str()) {
                    self.info.idents.insert(e.id, IdentRes::Class(name.clone()));
                    return Ty::ClassRef(name.clone());
                }
                self.unresolved(line, "symbol", name);
                Ty::Error
            }
            ExprKind::This => {
                if ctx.is_static {
                    self.err(line, DiagCode::TypeMismatch, "`this` used in static context");
                    Ty::Error
                } else {
                    Ty::T(TypeName::Class(ctx.class.name.clone()))
                }
            }
            ExprKind::Field { target, name } => {
                let target_ty = self.expr(target, ctx);
                match target_ty {
                    Ty::Error => Ty::Error,
                    Ty::ClassRef(c) => match self.table.field(&c, name) {
                        Some(f) if f.is_static => {
                            self.info.fields.insert(e.id, FieldRef::new(c, name.clone()));
                            Ty::T(f.ty.clone())
                        }
                        Some(_) => {
                            self.err(line, DiagCode::TypeMismatch, format!("field `{c}.{name}` is not static"));
                            Ty::Error
                        }
                        None => {
                            self.unresolved(line, "field", name);
                            Ty::Error
                        }
                    },
                    Ty::T(TypeName::Class(c)) => match self.table.field(&c, name) {
                        Some(f) => {
                            self.info.fields.insert(e.id, FieldRef::new(c, name.clone()));
                            Ty::T(f.ty.clone())
                        }
                        None => {
                            if self.table.classes.contains_key(c.as_str()) {
                                self.unresolved(line, "field", name);
                            }
                            Ty::Error
                        }
                    },
                    other => {
                        self.err(line, DiagCode::TypeMismatch, format!("{} has no fields", other.describe()));
                        Ty::Error
                    }
                }
            }
            ExprKind::Unary { op, operand } => {
                let t = self.value(operand, ctx);
                let want = match op {
                    UnaryOp::Neg => TypeName::Int,
                    UnaryOp::Not => TypeName::Bool,
                };
                if matches!(t, Ty::Error) {
                    return Ty::T(want);
                }
                if t != Ty::T(want.clone()) {
                    self.err(
                        line,
                        DiagCode::TypeMismatch,
                        format!("operator `{}` expects {want}, found {}", op.symbol(), t.describe()),
                    );
                }
                Ty::T(want)
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.value(lhs, ctx);
                let r = self.value(rhs, ctx);
                self.binary(*op, &l, &r, line)
            }
            ExprKind::Call { receiver, name, args } => self.call(e, receiver.as_deref(), name, args, ctx),
            ExprKind::New { class } => {
                if self.table.classes.contains_key(class.as_str()) {
                    self.info.calls.insert(e.id, Callee::Constructor(class.clone()));
                    Ty::T(TypeName::Class(class.clone()))
                } else {
                    self.unresolved(line, "class", class);
                    Ty::Error
                }
            }
            ExprKind::Index { target, index } => {
                let t = self.value(target, ctx);
                let i = self.value(index, ctx);
                if !matches!(i, Ty::T(TypeName::Int) | Ty::Error) {
                    self.err(line, DiagCode::TypeMismatch, format!("index must be int, found {}", i.describe()));
                }
                match t {
                    Ty::T(TypeName::List(inner)) => Ty::T(*inner),
                    Ty::Error => Ty::Error,
                    other => {
                        self.err(line, DiagCode::TypeMismatch, format!("cannot index into {}", other.describe()));
                        Ty::Error
                    }
                }
            }
        }
    }

    fn binary(&mut self, op: BinOp, l: &Ty, r: &Ty, line: u32) -> Ty {
        use BinOp::*;
        let int = Ty::T(TypeName::Int);
        let boolean = Ty::T(TypeName::Bool);
        let either_err = matches!(l, Ty::Error) || matches!(r, Ty::Error);
        let mismatch = |this: &mut Self| {
            this.err(
                line,
                DiagCode::TypeMismatch,
                format!("operator `{}` cannot be applied to {} and {}", op.symbol(), l.describe(), r.describe()),
            );
        };
        match op {
            Add => {
                let is_str = |t: &Ty| *t == Ty::T(TypeName::Str);
                let is_scalar = |t: &Ty| matches!(t, Ty::T(TypeName::Int | TypeName::Bool | TypeName::Str) | Ty::Error);
                if (is_str(l) && is_scalar(r)) || (is_str(r) && is_scalar(l)) {
                    Ty::T(TypeName::Str)
                } else if either_err {
                    Ty::Error
                } else if *l == int && *r == int {
                    int
                } else {
                    mismatch(self);
                    Ty::Error
                }
            }
            Sub | Mul | Div | Rem => {
                if !either_err && (*l != int || *r != int) {
                    mismatch(self);
                }
                int
            }
            Lt | Le | Gt | Ge => {
                if !either_err && (*l != int || *r != int) {
                    mismatch(self);
                }
                boolean
            }
            Eq | Ne => {
                if !comparable(l, r) {
                    mismatch(self);
                }
                boolean
            }
            And | Or => {
                if !either_err && (*l != boolean || *r != boolean) {
                    mismatch(self);
                }
                boolean
            }
        }
    }

    fn call(&mut self, e: &Expr, receiver: Option<&Expr>, name: &str, args: &[Expr], ctx: Ctx<'a>) -> Ty {
        let line = e.span.line;
        let receiver_ty = receiver.map(|r| self.expr(r, ctx));
        let arg_tys: Vec<Ty> = args.iter().map(|a| self.value(a, ctx)).collect();

        let (class, static_only) = match &receiver_ty {
            None => {
                if ctx.class.methods_named(name).next().is_some() {
                    (ctx.class.name.clone(), ctx.is_static)
                } else if BUILTINS.contains(&name) {
                    return self.builtin(e, name, &arg_tys, line);
                } else {
                    self.unresolved(line, "method", name);
                    return Ty::Error;
                }
            }
            Some(Ty::Error) => return Ty::Error,
            Some(Ty::ClassRef(c)) => (c.clone(), true),
            Some(Ty::T(TypeName::Class(c))) => {
                if !self.table.classes.contains_key(c.as_str()) {
                    return Ty::Error;
                }
                (c.clone(), false)
            }
            Some(other) => {
                let desc = other.describe();
                self.err(line, DiagCode::TypeMismatch, format!("cannot call method `{name}` on {desc}"));
                return Ty::Error;
            }
        };

        let Some(decl) = self.table.classes.get(class.as_str()).copied() else {
            self.unresolved(line, "class", &class);
            return Ty::Error;
        };
        let named: Vec<&MethodDecl> = decl.methods_named(name).collect();
        if named.is_empty() {
            self.unresolved(line, "method", name);
            return Ty::Error;
        }
        if arg_tys.iter().any(|t| *t == Ty::Error) {
            // Argument errors already reported; pick any same-arity overload for the result type.
            return named
                .iter()
                .find(|m| m.params.len() == arg_tys.len())
                .map(|m| Ty::T(m.ret.clone()))
                .unwrap_or(Ty::Error);
        }
        let applicable: Vec<&MethodDecl> = named
            .iter()
            .copied()
            .filter(|m| m.params.len() == arg_tys.len() && m.params.iter().zip(&arg_tys).all(|(p, a)| assignable(a, &p.ty)))
            .collect();
        let chosen = match applicable.len() {
            0 => {
                let sig: Vec<String> = arg_tys.iter().map(Ty::describe).collect();
                self.err(
                    line,
                    DiagCode::TypeMismatch,
                    format!("no overload of `{class}.{name}` accepts ({})", sig.join(", ")),
                );
                return Ty::Error;
            }
            1 => applicable[0],
            _ => {
                let exact: Vec<&MethodDecl> = applicable
                    .iter()
                    .copied()
                    .filter(|m| m.params.iter().zip(&arg_tys).all(|(p, a)| matches!(a, Ty::T(t) if *t == p.ty)))
                    .collect();
                if exact.len() == 1 {
                    exact[0]
                } else {
                    self.err(line, DiagCode::TypeMismatch, format!("ambiguous call to `{class}.{name}`"));
                    return Ty::Error;
                }
            }
        };
        if static_only && !chosen.is_static {
            self.err(
                line,
                DiagCode::TypeMismatch,
                format!("instance method `{class}.{name}` called without an instance"),
            );
            return Ty::Error;
        }
        self.info.calls.insert(e.id, Callee::Method(chosen.method_ref(&class)));
        Ty::T(chosen.ret.clone())
    }

    fn builtin(&mut self, e: &Expr, name: &str, args: &[Ty], line: u32) -> Ty {
        self.info.calls.insert(e.id, Callee::Builtin(name.to_string()));
        let int = TypeName::Int;
        let s = TypeName::Str;
        let is = |t: &Ty, want: &TypeName| matches!(t, Ty::Error) || *t == Ty::T(want.clone());
        let is_list = |t: &Ty| matches!(t, Ty::Error | Ty::EmptyList | Ty::T(TypeName::List(_)));
        let bad = |this: &mut Self| {
            let sig: Vec<String> = args.iter().map(Ty::describe).collect();
            this.err(line, DiagCode::TypeMismatch, format!("builtin `{name}` cannot be applied to ({})", sig.join(", ")));
            Ty::Error
        };
        match (name, args) {
            ("print", [_]) => Ty::T(TypeName::Unit),
            ("len", [x]) if is(x, &s) || is_list(x) => Ty::T(int),
            ("charCode", [a, b]) if is(a, &s) && is(b, &int) => Ty::T(int),
            ("fromCharCodes", [a]) if is(a, &TypeName::list_of(TypeName::Int)) || *a == Ty::EmptyList => Ty::T(s),
            ("substring", [a, b, c]) if is(a, &s) && is(b, &int) && is(c, &int) => Ty::T(s),
            ("append", [xs, x]) => match xs {
                Ty::T(TypeName::List(inner)) if assignable(x, inner) => Ty::T(TypeName::List(inner.clone())),
                Ty::EmptyList => match x {
                    Ty::T(t) => Ty::T(TypeName::list_of(t.clone())),
                    Ty::Error => Ty::Error,
                    _ => bad(self),
                },
                Ty::Error => Ty::Error,
                _ => bad(self),
            },
            ("contains", [xs, x]) => match xs {
                Ty::T(TypeName::List(inner)) if assignable(x, inner) => Ty::T(TypeName::Bool),
                Ty::T(TypeName::Str) if is(x, &s) => Ty::T(TypeName::Bool),
                Ty::EmptyList | Ty::Error => Ty::T(TypeName::Bool),
                _ => bad(self),
            },
            ("equals", [a, b]) if comparable(a, b) => Ty::T(TypeName::Bool),
            ("str", [x]) if matches!(x, Ty::Error | Ty::T(TypeName::Int | TypeName::Bool | TypeName::Str)) => Ty::T(s),
            ("reverse", [x]) => match x {
                Ty::T(t @ (TypeName::Str | TypeName::List(_))) => Ty::T(t.clone()),
                Ty::EmptyList => Ty::EmptyList,
                Ty::Error => Ty::Error,
                _ => bad(self),
            },
            ("abs", [x]) if is(x, &int) => Ty::T(int),
            ("min" | "max", [a, b]) if is(a, &int) && is(b, &int) => Ty::T(int),
            _ => bad(self),
        }
    }
}
