//! Def-use view of one test method, read as straight-line code.
//!
//! Every definition (`T v = e;` or `v = e;`) becomes a value node that
//! remembers its expression and the variable bindings visible at that point,
//! so tracing an operand back to its origins never needs re-execution.
//! Statements inside `if`/`while` are included in source order and marked
//! `nested`.

use std::collections::{BTreeSet, HashMap};

use crate::minilang::{Callee, Expr, ExprKind, IdentRes, MethodDecl, MethodRef, Stmt, StmtKind, TypeInfo};

pub(crate) type Env = HashMap<String, usize>;

pub(crate) struct ValueNode<'a> {
    pub expr: &'a Expr,
    pub env: Env,
}

pub(crate) struct Invocation<'a> {
    pub call: &'a Expr,
    pub method: MethodRef,
    pub args: Vec<&'a Expr>,
    pub env: Env,
    pub nested: bool,
}

pub(crate) struct AssertionSite<'a> {
    pub stmt: &'a Stmt,
    pub env: Env,
    pub nested: bool,
}

pub(crate) struct Slice<'a> {
    pub nodes: Vec<ValueNode<'a>>,
    pub invocations: Vec<Invocation<'a>>,
    /// Call expression id to its index in `invocations`.
    pub invocation_of: HashMap<u32, usize>,
    pub assertions: Vec<AssertionSite<'a>>,
    pub info: &'a TypeInfo,
}

/// Children of an expression in evaluation order.
pub(crate) fn children(e: &Expr) -> Vec<&Expr> {
    match &e.kind {
        ExprKind::List(items) => items.iter().collect(),
        ExprKind::Field { target, .. } => vec![target],
        ExprKind::Unary { operand, .. } => vec![operand],
        ExprKind::Binary { lhs, rhs, .. } => vec![lhs, rhs],
        ExprKind::Call { receiver, args, .. } => receiver.iter().map(|r| &**r).chain(args.iter()).collect(),
        ExprKind::Index { target, index } => vec![target, index],
        _ => Vec::new(),
    }
}

fn post_order<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    for c in children(e) {
        post_order(c, out);
    }
    out.push(e);
}

impl<'a> Slice<'a> {
    pub fn build(method: &'a MethodDecl, info: &'a TypeInfo, pair_methods: &BTreeSet<MethodRef>) -> Slice<'a> {
        let mut s = Slice { nodes: Vec::new(), invocations: Vec::new(), invocation_of: HashMap::new(), assertions: Vec::new(), info };
        let mut env = Env::new();
        s.block(&method.body.stmts, &mut env, false, pair_methods);
        s
    }

    fn block(&mut self, stmts: &'a [Stmt], env: &mut Env, nested: bool, pair: &BTreeSet<MethodRef>) {
        for stmt in stmts {
            for e in crate::minilang::stmt_exprs(stmt) {
                self.scan_calls(e, env, nested, pair);
            }
            match &stmt.kind {
                StmtKind::VarDecl { name, init, .. } => self.define(name, init, env),
                StmtKind::Assign { target, value } => {
                    if let ExprKind::Ident(name) = &target.kind {
                        if matches!(self.info.idents.get(&target.id), Some(IdentRes::Local)) {
                            self.define(name, value, env);
                        }
                    }
                }
                StmtKind::If { then_block, else_block, .. } => {
                    self.block(&then_block.stmts, env, true, pair);
                    if let Some(b) = else_block {
                        self.block(&b.stmts, env, true, pair);
                    }
                }
                StmtKind::While { body, .. } => self.block(&body.stmts, env, true, pair),
                StmtKind::Assert { .. } => self.assertions.push(AssertionSite { stmt, env: env.clone(), nested }),
                _ => {}
            }
        }
    }

    fn define(&mut self, name: &str, expr: &'a Expr, env: &mut Env) {
        self.nodes.push(ValueNode { expr, env: env.clone() });
        env.insert(name.to_string(), self.nodes.len() - 1);
    }

    fn scan_calls(&mut self, e: &'a Expr, env: &Env, nested: bool, pair: &BTreeSet<MethodRef>) {
        let mut order = Vec::new();
        post_order(e, &mut order);
        for x in order {
            if let (ExprKind::Call { args, .. }, Some(Callee::Method(m))) = (&x.kind, self.info.calls.get(&x.id)) {
                if pair.contains(m) {
                    self.invocation_of.insert(x.id, self.invocations.len());
                    self.invocations.push(Invocation {
                        call: x,
                        method: m.clone(),
                        args: args.iter().collect(),
                        env: env.clone(),
                        nested,
                    });
                }
            }
        }
    }

    /// The value node a local-variable identifier refers to, if any.
    pub fn node_of(&self, e: &Expr, env: &Env) -> Option<usize> {
        match &e.kind {
            ExprKind::Ident(name) if matches!(self.info.idents.get(&e.id), Some(IdentRes::Local)) => env.get(name).copied(),
            _ => None,
        }
    }

    /// Value nodes referenced by `e`, not looking inside pair invocations.
    pub fn referenced_nodes(&self, e: &Expr, env: &Env, out: &mut BTreeSet<usize>) {
        if self.invocation_of.contains_key(&e.id) {
            return;
        }
        if let Some(n) = self.node_of(e, env) {
            out.insert(n);
            return;
        }
        for c in children(e) {
            self.referenced_nodes(c, env, out);
        }
    }
}
