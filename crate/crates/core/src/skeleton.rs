//! MR-skeletons: input relation, method pair and normalized output relation
//! of a metamorphic test, plus the two similarity levels used to compare a
//! generated test with a human-written one.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coupling::CoupledPair;
use crate::minilang::{print_expr, typeck, AssertKind, BinOp, Callee, Expr, ExprKind, MethodRef, Program, Stmt, StmtKind, TestClass, UnaryOp};
use crate::validation::slice::{children, Env, Slice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    SourceInput,
    SourceOutput,
    FollowupInput,
    FollowupOutput,
    Constant,
    Other,
}

impl Role {
    fn is_pair_derived(self) -> bool {
        !matches!(self, Role::Constant | Role::Other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AssertionKind {
    Eq,
    Ne,
    TruePred,
    FalsePred,
    OrderLt,
    OrderLe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MRSkeleton {
    /// Sorted, so equal unordered pairs compare equal.
    pub method_pair: [MethodRef; 2],
    pub input_relation: Vec<String>,
    pub assertion_kind: AssertionKind,
    /// Sorted multiset.
    pub assertion_elements: Vec<Role>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl MRSkeleton {
    pub fn new(a: MethodRef, b: MethodRef, input_relation: Vec<String>, kind: AssertionKind, mut elements: Vec<Role>) -> Self {
        let method_pair = if a <= b { [a, b] } else { [b, a] };
        elements.sort();
        MRSkeleton { method_pair, input_relation, assertion_kind: kind, assertion_elements: elements, warnings: Vec::new() }
    }
}

impl fmt::Display for MRSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roles: Vec<String> = self.assertion_elements.iter().map(|r| format!("{r:?}")).collect();
        write!(
            f,
            "{{pair ({}, {}), inputRelation [{}], {:?}, {{{}}}}}",
            self.method_pair[0].name,
            self.method_pair[1].name,
            self.input_relation.join(", "),
            self.assertion_kind,
            roles.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityResult {
    pub l1: bool,
    pub l2: bool,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SkeletonError {
    #[error("NOT_EXTRACTABLE: {0}")]
    NotExtractable(String),
    #[error("NOT_AN_ASSERTION")]
    NotAnAssertion,
}

/// An assertion rewritten into one of the comparable kinds. `predicate` keeps
/// the original boolean expression of TRUE_PRED / FALSE_PRED.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedAssertion<'a> {
    pub kind: AssertionKind,
    pub operands: Vec<&'a Expr>,
    pub predicate: Option<&'a Expr>,
}

pub fn normalize_assertion(stmt: &Stmt) -> Result<NormalizedAssertion<'_>, SkeletonError> {
    match &stmt.kind {
        StmtKind::Assert { kind, args } => normalize_parts(*kind, args),
        _ => Err(SkeletonError::NotAnAssertion),
    }
}

pub fn normalize_parts(kind: AssertKind, args: &[Expr]) -> Result<NormalizedAssertion<'_>, SkeletonError> {
    let two = |k| match args {
        [a, b] => Ok(NormalizedAssertion { kind: k, operands: vec![a, b], predicate: None }),
        _ => Err(SkeletonError::NotAnAssertion),
    };
    match kind {
        AssertKind::Equals => two(AssertionKind::Eq),
        AssertKind::NotEquals => two(AssertionKind::Ne),
        AssertKind::True | AssertKind::False => match args {
            [p] => Ok(normalize_predicate(p, kind == AssertKind::True)),
            _ => Err(SkeletonError::NotAnAssertion),
        },
    }
}

fn normalize_predicate(p: &Expr, positive: bool) -> NormalizedAssertion<'_> {
    let rel = |kind, a, b| NormalizedAssertion { kind, operands: vec![a, b], predicate: None };
    match &p.kind {
        ExprKind::Unary { op: UnaryOp::Not, operand } => normalize_predicate(operand, !positive),
        ExprKind::Binary { op, lhs, rhs } => match (op, positive) {
            (BinOp::Eq, true) | (BinOp::Ne, false) => rel(AssertionKind::Eq, lhs, rhs),
            (BinOp::Ne, true) | (BinOp::Eq, false) => rel(AssertionKind::Ne, lhs, rhs),
            (BinOp::Lt, true) => rel(AssertionKind::OrderLt, lhs, rhs),
            (BinOp::Le, true) => rel(AssertionKind::OrderLe, lhs, rhs),
            (BinOp::Gt, true) => rel(AssertionKind::OrderLt, rhs, lhs),
            (BinOp::Ge, true) => rel(AssertionKind::OrderLe, rhs, lhs),
            _ => pred(p, positive),
        },
        ExprKind::Call { receiver: None, name, args } if name == "equals" && args.len() == 2 => {
            rel(if positive { AssertionKind::Eq } else { AssertionKind::Ne }, &args[0], &args[1])
        }
        _ => pred(p, positive),
    }
}

fn pred(p: &Expr, positive: bool) -> NormalizedAssertion<'_> {
    let operands: Vec<&Expr> = match &p.kind {
        ExprKind::Call { .. } | ExprKind::Binary { .. } | ExprKind::Unary { .. } => children(p),
        _ => vec![p],
    };
    let operands = if operands.is_empty() { vec![p] } else { operands };
    let kind = if positive { AssertionKind::TruePred } else { AssertionKind::FalsePred };
    NormalizedAssertion { kind, operands, predicate: Some(p) }
}

/// Source text of a normalized assertion in canonical form.
pub fn render_normalized(n: &NormalizedAssertion<'_>) -> String {
    let op = |i: usize| n.operands.get(i).map(|e| print_expr(e)).unwrap_or_default();
    let (a, b) = (op(0), op(1));
    match n.kind {
        AssertionKind::Eq => format!("assertEquals({a}, {b});"),
        AssertionKind::Ne => format!("assertNotEquals({a}, {b});"),
        AssertionKind::OrderLt => format!("assertTrue({a} < {b});"),
        AssertionKind::OrderLe => format!("assertTrue({a} <= {b});"),
        AssertionKind::TruePred => format!("assertTrue({});", print_expr(n.predicate.unwrap())),
        AssertionKind::FalsePred => format!("assertFalse({});", print_expr(n.predicate.unwrap())),
    }
}

pub fn compare(generated: &MRSkeleton, reference: &MRSkeleton) -> SimilarityResult {
    let mut mismatches = Vec::new();
    let l1 = generated.method_pair == reference.method_pair;
    if !l1 {
        mismatches.push("methodPair".to_string());
    }
    if generated.input_relation != reference.input_relation {
        mismatches.push("inputRelation".to_string());
    }
    if generated.assertion_kind != reference.assertion_kind {
        mismatches.push("assertionKind".to_string());
    }
    if generated.assertion_elements != reference.assertion_elements {
        mismatches.push("assertionElements".to_string());
    }
    SimilarityResult { l1, l2: mismatches.is_empty(), mismatches }
}

/// Skeleton of a test for a coupled pair: the invocations considered are
/// calls to either method of the pair.
pub fn extract_skeleton(program: &Program, test: &TestClass, pair: &CoupledPair) -> Result<MRSkeleton, SkeletonError> {
    extract_skeleton_with(program, test, &[pair.target.clone(), pair.candidate.clone()].into())
}

/// Like [`extract_skeleton`] with an arbitrary set of methods under test; the
/// first two invocations of any of them define the pair.
pub fn extract_skeleton_with(program: &Program, test: &TestClass, methods: &BTreeSet<MethodRef>) -> Result<MRSkeleton, SkeletonError> {
    let info = typeck::check_test_class(program, test, &format!("{}.mini", test.name()))
        .map_err(|d| SkeletonError::NotExtractable(format!("test does not type-check: {}", d[0])))?;
    let Some((method, slice)) = test
        .test_methods()
        .map(|m| (m, Slice::build(m, &info, methods)))
        .find(|(_, s)| s.invocations.len() >= 2)
    else {
        return Err(SkeletonError::NotExtractable("no test method invokes the pair twice".into()));
    };
    let (src, fu) = (&slice.invocations[0], &slice.invocations[1]);
    if src.nested || fu.nested {
        return Err(SkeletonError::NotExtractable("pair invocation inside a loop or branch".into()));
    }
    let mut warnings = Vec::new();
    if slice.invocations.len() > 2 {
        let w = format!("{} invokes the pair {} times; only the first two are used", method.name, slice.invocations.len());
        tracing::warn!("{w}");
        warnings.push(w);
    }
    let tags = Tags::new(&slice);
    let input_relation = input_relation(&slice, &tags);
    let mut chosen = None;
    for a in slice.assertions.iter().filter(|a| !a.nested) {
        let n = normalize_assertion(a.stmt)?;
        let roles: Vec<Role> = n.operands.iter().map(|e| tags.role(e, &a.env)).collect();
        if roles.iter().any(|r| r.is_pair_derived()) {
            chosen = Some((n.kind, roles));
        }
    }
    let Some((kind, roles)) = chosen else {
        return Err(SkeletonError::NotExtractable("no assertion relates pair-derived values".into()));
    };
    let mut sk = MRSkeleton::new(src.method.clone(), fu.method.clone(), input_relation, kind, roles);
    sk.warnings = warnings;
    Ok(sk)
}

/// Root roles of the value nodes and calls of the first two invocations.
struct Tags<'s, 'a> {
    slice: &'s Slice<'a>,
    node_roles: Vec<Option<Role>>,
    src_call: u32,
    fu_call: u32,
}

impl<'s, 'a> Tags<'s, 'a> {
    fn new(slice: &'s Slice<'a>) -> Self {
        let (src, fu) = (&slice.invocations[0], &slice.invocations[1]);
        let mut node_roles = vec![None; slice.nodes.len()];
        let mut tag = |nodes: BTreeSet<usize>, role| {
            for n in nodes {
                node_roles[n].get_or_insert(role);
            }
        };
        let outputs = |call: u32| -> BTreeSet<usize> {
            slice.nodes.iter().enumerate().filter(|(_, n)| n.expr.id == call).map(|(i, _)| i).collect()
        };
        let inputs = |inv: &crate::validation::slice::Invocation<'_>| {
            let mut s = BTreeSet::new();
            for a in &inv.args {
                slice.referenced_nodes(a, &inv.env, &mut s);
            }
            s
        };
        tag(outputs(src.call.id), Role::SourceOutput);
        tag(inputs(src), Role::SourceInput);
        tag(outputs(fu.call.id), Role::FollowupOutput);
        tag(inputs(fu), Role::FollowupInput);
        Tags { slice, node_roles, src_call: src.call.id, fu_call: fu.call.id }
    }

    /// Role of an assertion operand: the nearest tagged root by breadth-first
    /// search over def-use edges; CONSTANT when only literals are reachable.
    fn role(&self, e: &Expr, env: &Env) -> Role {
        let mut queue: VecDeque<(&Expr, &Env)> = VecDeque::from([(e, env)]);
        let mut seen = HashSet::new();
        let mut literal_only = true;
        while let Some((x, env)) = queue.pop_front() {
            if x.id == self.src_call {
                return Role::SourceOutput;
            }
            if x.id == self.fu_call {
                return Role::FollowupOutput;
            }
            if self.slice.invocation_of.contains_key(&x.id) {
                literal_only = false;
                continue;
            }
            if let Some(n) = self.slice.node_of(x, env) {
                if let Some(r) = self.node_roles[n] {
                    return r;
                }
                if seen.insert(n) {
                    let node = &self.slice.nodes[n];
                    queue.push_back((node.expr, &node.env));
                }
                continue;
            }
            let cs = children(x);
            match &x.kind {
                ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Str(_) | ExprKind::Null | ExprKind::List(_) => {}
                ExprKind::Unary { .. } | ExprKind::Binary { .. } | ExprKind::Index { .. } => {}
                ExprKind::Call { .. } if matches!(self.slice.info.calls.get(&x.id), Some(Callee::Builtin(_))) => {}
                _ => literal_only = false,
            }
            queue.extend(cs.into_iter().map(|c| (c, env)));
        }
        if literal_only {
            Role::Constant
        } else {
            Role::Other
        }
    }

    fn is_source_root(&self, x: &Expr, env: &Env) -> bool {
        x.id == self.src_call
            || self
                .slice
                .node_of(x, env)
                .is_some_and(|n| matches!(self.node_roles[n], Some(Role::SourceInput | Role::SourceOutput)))
    }
}

/// Names of the non-pair calls on the def-use path from a source root to each
/// follow-up argument, ordered from root to argument.
fn input_relation(slice: &Slice<'_>, tags: &Tags<'_, '_>) -> Vec<String> {
    let fu = &slice.invocations[1];
    let mut out = Vec::new();
    for a in &fu.args {
        let mut path = Vec::new();
        let mut seen = HashSet::new();
        if path_to_root(slice, tags, a, &fu.env, &mut path, &mut seen) {
            out.extend(path.into_iter().rev());
        }
    }
    out
}

fn path_to_root(slice: &Slice<'_>, tags: &Tags<'_, '_>, e: &Expr, env: &Env, path: &mut Vec<String>, seen: &mut HashSet<usize>) -> bool {
    if tags.is_source_root(e, env) {
        return true;
    }
    if slice.invocation_of.contains_key(&e.id) {
        return false;
    }
    if let Some(n) = slice.node_of(e, env) {
        if !seen.insert(n) {
            return false;
        }
        let node = &slice.nodes[n];
        return path_to_root(slice, tags, node.expr, &node.env, path, seen);
    }
    let pushed = if let ExprKind::Call { name, .. } = &e.kind {
        path.push(name.clone());
        true
    } else {
        false
    };
    for c in children(e) {
        if path_to_root(slice, tags, c, env, path, seen) {
            return true;
        }
    }
    if pushed {
        path.pop();
    }
    false
}
