//! Refinement of candidates that do not compile or only crash.
//!
//! One LLM revision round is tried first. If the result still has unresolved
//! symbols, a static repair renames each one to the corpus declaration that
//! matches it case-insensitively, but only when that match is unique. The
//! original tool injected missing Java imports at this point; the
//! mini-language has no imports, and a slipped identifier case is the
//! closest failure with a deterministic fix.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::extract::{extract_syntax, extract_test_class, ExtractionError};
use crate::llm::{ChatProvider, ChatSession};
use crate::minilang::{
    check_test_class, print_test_class, run_test_class, Block, DiagCode, Expr, ExprKind, Limits, OutcomeKind, Program,
    StmtKind, TestClass, TypeName,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Initial,
    LlmRevision,
    StaticRepair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RefinementEntry {
    pub stage: Stage,
    /// Empty when the stage produced an executable candidate.
    pub diagnostics: Vec<String>,
}

/// Result of checking one reply: the compiled class when it compiles, and
/// the problems that make it non-executable.
#[derive(Debug, Clone)]
pub struct Assessment {
    pub test_class: Option<TestClass>,
    pub diagnostics: Vec<String>,
    pub unresolved: bool,
    pub error: Option<ExtractionError>,
}

impl Assessment {
    pub fn executable(&self) -> bool {
        self.test_class.is_some() && self.diagnostics.is_empty()
    }
}

pub fn assess(reply: &str, program: &Program, limits: &Limits) -> Assessment {
    match extract_test_class(reply, program) {
        Ok(test) => assess_class(test, program, limits),
        Err(e) => {
            let diagnostics = match &e {
                ExtractionError::ParseFailed(d) => d.iter().map(|d| d.to_string()).collect(),
                other => vec![other.to_string()],
            };
            let unresolved = e.diagnostics().iter().any(|d| d.code == DiagCode::UnresolvedSymbol);
            Assessment { test_class: None, diagnostics, unresolved, error: Some(e) }
        }
    }
}

fn assess_class(test: TestClass, program: &Program, limits: &Limits) -> Assessment {
    let run = run_test_class(program, &test, limits);
    let diagnostics = if run.all_runtime_errors() {
        run.class_error
            .iter()
            .chain(run.outcomes.values())
            .filter(|o| o.kind != OutcomeKind::Pass)
            .map(|o| format!("{}: {}", o.kind, o.message))
            .collect()
    } else {
        Vec::new()
    };
    Assessment { test_class: Some(test), diagnostics, unresolved: false, error: None }
}

pub fn revision_request(diagnostics: &[String]) -> String {
    format!(
        "The test class does not run. The errors are:\n{}\nFix the errors and reply with the complete corrected test class in one code block.",
        diagnostics.join("\n")
    )
}

/// Outcome of [`refine`]: the last reply text, its assessment, and the log
/// entries the refinement stages appended.
pub struct Refined {
    pub reply: String,
    pub assessment: Assessment,
    pub log: Vec<RefinementEntry>,
}

/// Stage 1 sends the diagnostics back on `session`; stage 2 applies static
/// repair when unresolved symbols remain. Never more than one of each.
pub fn refine(
    reply: &str,
    first: Assessment,
    session: &mut ChatSession,
    provider: &dyn ChatProvider,
    program: &Program,
    limits: &Limits,
) -> Refined {
    let mut log = Vec::new();
    let mut reply = reply.to_string();
    let mut current = first;
    match session.send(provider, &revision_request(&current.diagnostics)) {
        Ok(r) => {
            let a = assess(&r, program, limits);
            log.push(RefinementEntry { stage: Stage::LlmRevision, diagnostics: a.diagnostics.clone() });
            // A revision that no longer parses is worse than the original for
            // static repair, so keep whichever reply still has a class.
            if a.executable() || a.unresolved || !current.unresolved {
                reply = r;
                current = a;
            }
        }
        Err(e) => log.push(RefinementEntry { stage: Stage::LlmRevision, diagnostics: vec![e.to_string()] }),
    }
    if !current.executable() && current.unresolved {
        let repaired = static_repair(&reply, program, limits);
        log.push(RefinementEntry { stage: Stage::StaticRepair, diagnostics: repaired.diagnostics.clone() });
        if let Some(t) = &repaired.test_class {
            reply = format!("```\n{}```", print_test_class(t));
        }
        current = repaired;
    }
    Refined { reply, assessment: current, log }
}

/// Case-insensitive rebinding of unresolved identifiers to the unique
/// matching class, method or field name in the corpus.
pub fn static_repair(reply: &str, program: &Program, limits: &Limits) -> Assessment {
    let fail = |diagnostics: Vec<String>| Assessment { test_class: None, diagnostics, unresolved: true, error: None };
    let Ok(mut test) = extract_syntax(reply) else {
        return fail(vec!["static repair: reply has no parsable class".into()]);
    };
    let mut names = BTreeSet::new();
    for c in &program.classes {
        names.insert(c.name.as_str());
        names.extend(c.methods.iter().map(|m| m.name.as_str()));
        names.extend(c.fields.iter().map(|f| f.name.as_str()));
    }
    // Each round fixes every symbol the checker reports; renaming a receiver
    // can expose a further unresolved member, so a few rounds are allowed.
    for _ in 0..4 {
        let diags = match check_test_class(program, &test, "candidate.mini") {
            Ok(()) => return assess_class(test, program, limits),
            Err(d) => d,
        };
        let symbols: BTreeSet<&str> = diags
            .iter()
            .filter(|d| d.code == DiagCode::UnresolvedSymbol)
            .filter_map(|d| d.symbol.as_deref())
            .collect();
        let mut problems = Vec::new();
        let mut renamed = false;
        for s in &symbols {
            let hits: Vec<&&str> = names.iter().filter(|n| n.eq_ignore_ascii_case(s) && *n != s).collect();
            match hits.as_slice() {
                [one] => {
                    for m in &mut test.decl.methods {
                        rename_block(&mut m.body, s, one);
                    }
                    renamed = true;
                }
                [] => problems.push(format!("static repair: no declaration matches `{s}`")),
                _ => problems.push(format!("static repair: `{s}` is ambiguous")),
            }
        }
        if !problems.is_empty() || !renamed {
            let mut all: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            all.extend(problems);
            return fail(all);
        }
    }
    fail(vec!["static repair: symbols still unresolved".into()])
}

fn rename_type(t: &mut TypeName, from: &str, to: &str) {
    match t {
        TypeName::Class(c) if c == from => *c = to.to_string(),
        TypeName::List(inner) => rename_type(inner, from, to),
        _ => {}
    }
}

fn rename_block(b: &mut Block, from: &str, to: &str) {
    for s in &mut b.stmts {
        match &mut s.kind {
            StmtKind::VarDecl { ty, init, .. } => {
                rename_type(ty, from, to);
                rename_expr(init, from, to);
            }
            StmtKind::Assign { target, value } => {
                rename_expr(target, from, to);
                rename_expr(value, from, to);
            }
            StmtKind::If { cond, then_block, else_block } => {
                rename_expr(cond, from, to);
                rename_block(then_block, from, to);
                if let Some(e) = else_block {
                    rename_block(e, from, to);
                }
            }
            StmtKind::While { cond, body } => {
                rename_expr(cond, from, to);
                rename_block(body, from, to);
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    rename_expr(e, from, to);
                }
            }
            StmtKind::Expr(e) | StmtKind::Throw(e) => rename_expr(e, from, to),
            StmtKind::Assert { args, .. } => args.iter_mut().for_each(|a| rename_expr(a, from, to)),
        }
    }
}

fn rename_expr(e: &mut Expr, from: &str, to: &str) {
    let fix = |s: &mut String| {
        if s == from {
            *s = to.to_string();
        }
    };
    match &mut e.kind {
        ExprKind::Ident(n) => fix(n),
        ExprKind::New { class } => fix(class),
        ExprKind::List(items) => items.iter_mut().for_each(|x| rename_expr(x, from, to)),
        ExprKind::Field { target, name } => {
            rename_expr(target, from, to);
            fix(name);
        }
        ExprKind::Unary { operand, .. } => rename_expr(operand, from, to),
        ExprKind::Binary { lhs, rhs, .. } => {
            rename_expr(lhs, from, to);
            rename_expr(rhs, from, to);
        }
        ExprKind::Call { receiver, name, args } => {
            if let Some(r) = receiver {
                rename_expr(r, from, to);
            }
            fix(name);
            args.iter_mut().for_each(|x| rename_expr(x, from, to));
        }
        ExprKind::Index { target, index } => {
            rename_expr(target, from, to);
            rename_expr(index, from, to);
        }
        _ => {}
    }
}
