//! First-order mutants of the two pair methods.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coupling::CoupledPair;
use crate::minilang::{
    print_class, print_expr, stmt_exprs, walk_expr, walk_stmts, BinOp, Block, Expr, ExprKind,
    MethodRef, NodeId, Program, Stmt, StmtKind,
};

pub const DEFAULT_MUTANT_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operator {
    /// Arithmetic operator replacement.
    AOR,
    /// Relational operator replacement.
    ROR,
    /// Conditional operator replacement.
    COR,
    /// Literal value replacement.
    LVR,
    /// Statement deletion.
    SDL,
}

const ARITH: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem];
const REL: [BinOp; 6] = [BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge];
const COND: [BinOp; 2] = [BinOp::And, BinOp::Or];

#[derive(Debug, Clone)]
pub struct Mutant {
    pub id: String,
    pub operator: Operator,
    pub method: MethodRef,
    pub target_node: NodeId,
    pub line: u32,
    /// Rendering of the mutated node before and after (`after` is empty for
    /// a deleted statement).
    pub diff_token: (String, String),
    pub program: Program,
}

#[derive(Debug, Clone)]
enum Edit {
    Op(BinOp),
    Int(i64),
    Bool(bool),
    Str,
    Delete,
}

#[derive(Debug, Clone)]
struct Site {
    operator: Operator,
    method: MethodRef,
    node: NodeId,
    line: u32,
    before: String,
    edit: Edit,
}

fn sites_of(method: &MethodRef, body: &Block) -> Vec<Site> {
    let mut out = Vec::new();
    walk_stmts(body, &mut |s: &Stmt| {
        if matches!(s.kind, StmtKind::Assign { .. } | StmtKind::Expr(_)) {
            out.push(Site {
                operator: Operator::SDL,
                method: method.clone(),
                node: s.id,
                line: s.span.line,
                before: crate::minilang::printer::print_stmt_line(s).trim().to_string(),
                edit: Edit::Delete,
            });
        }
        for e in stmt_exprs(s) {
            walk_expr(e, &mut |x: &Expr| {
                let mut push = |operator, before: String, edit| {
                    out.push(Site { operator, method: method.clone(), node: x.id, line: x.span.line, before, edit })
                };
                match &x.kind {
                    ExprKind::Binary { op, .. } => {
                        let (operator, table): (Operator, &[BinOp]) = if ARITH.contains(op) {
                            (Operator::AOR, &ARITH)
                        } else if REL.contains(op) {
                            (Operator::ROR, &REL)
                        } else {
                            (Operator::COR, &COND)
                        };
                        for alt in table.iter().filter(|a| *a != op) {
                            push(operator, op.symbol().to_string(), Edit::Op(*alt));
                        }
                    }
                    ExprKind::Int(k) => {
                        let mut alts: Vec<i64> = Vec::new();
                        for alt in [k.wrapping_add(1), k.wrapping_sub(1), 0] {
                            if alt != *k && !alts.contains(&alt) {
                                alts.push(alt);
                            }
                        }
                        for alt in alts {
                            push(Operator::LVR, k.to_string(), Edit::Int(alt));
                        }
                    }
                    ExprKind::Bool(b) => push(Operator::LVR, b.to_string(), Edit::Bool(!b)),
                    ExprKind::Str(s) if !s.is_empty() => push(Operator::LVR, print_expr(x), Edit::Str),
                    _ => {}
                }
            });
        }
    });
    out
}

fn edit_in_expr(e: &mut Expr, id: NodeId, edit: &Edit) -> bool {
    if e.id == id {
        match (&mut e.kind, edit) {
            (ExprKind::Binary { op, .. }, Edit::Op(alt)) => *op = *alt,
            (ExprKind::Int(v), Edit::Int(alt)) => *v = *alt,
            (ExprKind::Bool(v), Edit::Bool(alt)) => *v = *alt,
            (ExprKind::Str(s), Edit::Str) => s.clear(),
            _ => return false,
        }
        return true;
    }
    match &mut e.kind {
        ExprKind::List(items) => items.iter_mut().any(|x| edit_in_expr(x, id, edit)),
        ExprKind::Field { target, .. } => edit_in_expr(target, id, edit),
        ExprKind::Unary { operand, .. } => edit_in_expr(operand, id, edit),
        ExprKind::Binary { lhs, rhs, .. } => edit_in_expr(lhs, id, edit) || edit_in_expr(rhs, id, edit),
        ExprKind::Call { receiver, args, .. } => {
            receiver.as_deref_mut().is_some_and(|r| edit_in_expr(r, id, edit))
                || args.iter_mut().any(|x| edit_in_expr(x, id, edit))
        }
        ExprKind::Index { target, index } => edit_in_expr(target, id, edit) || edit_in_expr(index, id, edit),
        _ => false,
    }
}

fn edit_in_block(b: &mut Block, id: NodeId, edit: &Edit) -> bool {
    if matches!(edit, Edit::Delete) {
        if let Some(pos) = b.stmts.iter().position(|s| s.id == id) {
            b.stmts.remove(pos);
            return true;
        }
    }
    for s in &mut b.stmts {
        let hit = match &mut s.kind {
            StmtKind::VarDecl { init, .. } => edit_in_expr(init, id, edit),
            StmtKind::Assign { target, value } => edit_in_expr(target, id, edit) || edit_in_expr(value, id, edit),
            StmtKind::If { cond, then_block, else_block } => {
                edit_in_expr(cond, id, edit)
                    || edit_in_block(then_block, id, edit)
                    || else_block.as_mut().is_some_and(|e| edit_in_block(e, id, edit))
            }
            StmtKind::While { cond, body } => edit_in_expr(cond, id, edit) || edit_in_block(body, id, edit),
            StmtKind::Return(e) => e.as_mut().is_some_and(|e| edit_in_expr(e, id, edit)),
            StmtKind::Expr(e) | StmtKind::Throw(e) => edit_in_expr(e, id, edit),
            StmtKind::Assert { args, .. } => args.iter_mut().any(|x| edit_in_expr(x, id, edit)),
        };
        if hit {
            return true;
        }
    }
    false
}

fn after_text(site: &Site) -> String {
    match &site.edit {
        Edit::Op(op) => op.symbol().to_string(),
        Edit::Int(v) => v.to_string(),
        Edit::Bool(b) => b.to_string(),
        Edit::Str => "\"\"".to_string(),
        Edit::Delete => String::new(),
    }
}

fn apply(program: &Program, site: &Site) -> Option<Program> {
    let mut classes = program.classes.clone();
    let class = classes.iter_mut().find(|c| c.name == site.method.class)?;
    let method = class.methods.iter_mut().find(|m| m.method_ref(&site.method.class) == site.method)?;
    if !edit_in_block(&mut method.body, site.node, &site.edit) {
        return None;
    }
    program.with_classes(classes).ok()
}

/// Every type-correct single-edit mutant of the two pair methods, in AST
/// order (target method first), before any sampling.
pub fn enumerate_mutants(program: &Program, pair: &CoupledPair) -> Vec<Mutant> {
    let mut out = Vec::new();
    for mref in [&pair.target, &pair.candidate] {
        let Some(decl) = program.method(mref) else { continue };
        for site in sites_of(mref, &decl.body) {
            if let Some(mutated) = apply(program, &site) {
                let after = after_text(&site);
                out.push(Mutant {
                    id: String::new(),
                    operator: site.operator,
                    method: site.method.clone(),
                    target_node: site.node,
                    line: site.line,
                    diff_token: (site.before.clone(), after),
                    program: mutated,
                });
            }
        }
    }
    for (i, m) in out.iter_mut().enumerate() {
        m.id = format!("m{:03}", i + 1);
    }
    out
}

/// Enumerates mutants and, when more than `cap` survive type checking, keeps
/// a seeded sample of `cap` of them (in enumeration order).
pub fn generate_mutants(program: &Program, pair: &CoupledPair, cap: usize, seed: u64) -> Vec<Mutant> {
    let all = enumerate_mutants(program, pair);
    if all.len() <= cap {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = sample(&mut rng, all.len(), cap).into_vec();
    keep.sort_unstable();
    let mut all: Vec<Option<Mutant>> = all.into_iter().map(Some).collect();
    keep.into_iter().map(|i| all[i].take().unwrap()).collect()
}

/// Unified diff of the mutated class against the original.
pub fn mutant_diff(original: &Program, mutant: &Mutant) -> String {
    let class = &mutant.method.class;
    let before = original.class(class).map(print_class).unwrap_or_default();
    let after = mutant.program.class(class).map(print_class).unwrap_or_default();
    let path = original.path_of_class(class);
    similar::TextDiff::from_lines(&before, &after)
        .unified_diff()
        .context_radius(2)
        .header(&format!("a/{path}"), &format!("b/{path} ({} {})", mutant.id, operator_name(mutant.operator)))
        .to_string()
}

pub fn operator_name(op: Operator) -> &'static str {
    match op {
        Operator::AOR => "AOR",
        Operator::ROR => "ROR",
        Operator::COR => "COR",
        Operator::LVR => "LVR",
        Operator::SDL => "SDL",
    }
}
