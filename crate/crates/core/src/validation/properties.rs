use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::slice::{children, Env, Slice};
use crate::coupling::CoupledPair;
use crate::minilang::{typeck, Expr, Program, TestClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MtcPropertyReport {
    pub invocation_count: usize,
    pub has_relating_assertion: bool,
    pub is_mtc: bool,
}

/// Checks the two necessary properties of an MTC: at least two invocations of
/// the pair's methods, and an assertion relating two distinct invocations.
///
/// An operand reaches invocation `i` when its def-use closure contains the
/// call `i` itself (its output) or a value passed as an argument to `i` (its
/// input). Arguments shared by every invocation of the method, such as a
/// common key, do not count, and the closure never descends into the
/// arguments of another pair call. A test class that does not type-check has
/// no properties.
pub fn check_mtc_properties(program: &Program, test: &TestClass, pair: &CoupledPair) -> MtcPropertyReport {
    let Ok(info) = typeck::check_test_class(program, test, &format!("{}.mini", test.name())) else {
        return MtcPropertyReport { invocation_count: 0, has_relating_assertion: false, is_mtc: false };
    };
    let pair_methods: BTreeSet<_> = [pair.target.clone(), pair.candidate.clone()].into();
    let mut count = 0;
    let mut relating = false;
    for m in test.test_methods() {
        let slice = Slice::build(m, &info, &pair_methods);
        count += slice.invocations.len();
        relating |= has_relating_assertion(&slice);
    }
    MtcPropertyReport { invocation_count: count, has_relating_assertion: relating, is_mtc: count >= 2 && relating }
}

fn has_relating_assertion(slice: &Slice<'_>) -> bool {
    let inputs: Vec<BTreeSet<usize>> = slice
        .invocations
        .iter()
        .map(|inv| {
            let mut s = BTreeSet::new();
            for a in &inv.args {
                slice.referenced_nodes(a, &inv.env, &mut s);
            }
            s
        })
        .collect();
    let shared: BTreeSet<usize> = match inputs.split_first() {
        Some((first, rest)) if !rest.is_empty() => {
            first.iter().copied().filter(|n| rest.iter().all(|r| r.contains(n))).collect()
        }
        _ => BTreeSet::new(),
    };
    slice.assertions.iter().any(|a| {
        let mut reached = BTreeSet::new();
        let mut seen = HashSet::new();
        for arg in assertion_args(a.stmt) {
            reach(slice, arg, &a.env, &inputs, &shared, &mut reached, &mut seen);
        }
        reached.len() >= 2
    })
}

fn assertion_args(stmt: &crate::minilang::Stmt) -> &[Expr] {
    match &stmt.kind {
        crate::minilang::StmtKind::Assert { args, .. } => args,
        _ => &[],
    }
}

fn reach(
    slice: &Slice<'_>,
    e: &Expr,
    env: &Env,
    inputs: &[BTreeSet<usize>],
    shared: &BTreeSet<usize>,
    reached: &mut BTreeSet<usize>,
    seen: &mut HashSet<usize>,
) {
    if let Some(&i) = slice.invocation_of.get(&e.id) {
        reached.insert(i);
        return;
    }
    if let Some(n) = slice.node_of(e, env) {
        if !seen.insert(n) {
            return;
        }
        if !shared.contains(&n) {
            for (i, ins) in inputs.iter().enumerate() {
                if ins.contains(&n) {
                    reached.insert(i);
                }
            }
        }
        let node = &slice.nodes[n];
        reach(slice, node.expr, &node.env, inputs, shared, reached, seen);
        return;
    }
    for c in children(e) {
        reach(slice, c, env, inputs, shared, reached, seen);
    }
}
