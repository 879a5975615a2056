use std::time::Instant;

use mtcforge_core::minilang::{parse_test_class_syntax, print_expr, MethodRef, StmtKind, TypeName};
use mtcforge_core::skeleton::{compare, normalize_assertion, AssertionKind, MRSkeleton, Role};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn method() -> impl Strategy<Value = MethodRef> {
    (prop::sample::select(vec!["encryptText", "decryptText", "add", "remove"]), prop::bool::ANY)
        .prop_map(|(n, two)| MethodRef::new("C", n, if two { vec![TypeName::Str, TypeName::Int] } else { vec![TypeName::Int] }))
}

fn kind() -> impl Strategy<Value = AssertionKind> {
    prop::sample::select(vec![
        AssertionKind::Eq,
        AssertionKind::Ne,
        AssertionKind::TruePred,
        AssertionKind::FalsePred,
        AssertionKind::OrderLt,
        AssertionKind::OrderLe,
    ])
}

fn role() -> impl Strategy<Value = Role> {
    prop::sample::select(vec![
        Role::SourceInput,
        Role::SourceOutput,
        Role::FollowupInput,
        Role::FollowupOutput,
        Role::Constant,
        Role::Other,
    ])
}

fn skeleton() -> impl Strategy<Value = MRSkeleton> {
    (
        method(),
        method(),
        prop::collection::vec(prop::sample::select(vec!["reverse", "append", "twice"]).prop_map(String::from), 0..2),
        kind(),
        prop::collection::vec(role(), 1..3),
    )
        .prop_map(|(a, b, rel, k, els)| MRSkeleton::new(a, b, rel, k, els))
}

/// A second skeleton that often shares some or all of the first one's parts,
/// so both outcomes of each level show up.
fn pair() -> impl Strategy<Value = (MRSkeleton, MRSkeleton)> {
    (skeleton(), skeleton(), prop::array::uniform4(prop::bool::ANY)).prop_map(|(a, mut b, keep)| {
        if keep[0] {
            b.method_pair = a.method_pair.clone();
        }
        if keep[1] {
            b.input_relation = a.input_relation.clone();
        }
        if keep[2] {
            b.assertion_kind = a.assertion_kind;
        }
        if keep[3] {
            b.assertion_elements = a.assertion_elements.clone();
        }
        (a, b)
    })
}

pub fn similarity_laws_on_500_random_pairs() {
    let start = Instant::now();
    let mut runner = TestRunner::new(Config { cases: 500, failure_persistence: None, ..Config::default() });
    runner
        .run(&pair(), |(a, b)| {
            let r = compare(&a, &b);
            prop_assert!(!r.l2 || r.l1, "L2 without L1: {r:?}");
            prop_assert_eq!(r.l1, a.method_pair == b.method_pair);
            prop_assert_eq!(r.l2, a == b);
            prop_assert_eq!(&compare(&b, &a), &r);
            let own = compare(&a, &a);
            prop_assert!(own.l1 && own.l2 && own.mismatches.is_empty());
            Ok(())
        })
        .unwrap();
    assert!(start.elapsed().as_secs() < 10);
}

pub fn pair_order_is_irrelevant() {
    let (a, b) = (MethodRef::new("C", "a", vec![]), MethodRef::new("C", "b", vec![]));
    let x = MRSkeleton::new(a.clone(), b.clone(), vec![], AssertionKind::Eq, vec![Role::FollowupOutput, Role::SourceInput]);
    let y = MRSkeleton::new(b, a, vec![], AssertionKind::Eq, vec![Role::SourceInput, Role::FollowupOutput]);
    assert!(compare(&x, &y).l2);
}

pub fn normalization_table() {
    let table: &[(&str, AssertionKind, &[&str])] = &[
        ("assertEquals(x, y)", AssertionKind::Eq, &["x", "y"]),
        ("assertNotEquals(x, y)", AssertionKind::Ne, &["x", "y"]),
        ("assertTrue(x == y)", AssertionKind::Eq, &["x", "y"]),
        ("assertTrue(equals(x, y))", AssertionKind::Eq, &["x", "y"]),
        ("assertTrue(x != y)", AssertionKind::Ne, &["x", "y"]),
        ("assertFalse(x == y)", AssertionKind::Ne, &["x", "y"]),
        ("assertFalse(equals(x, y))", AssertionKind::Ne, &["x", "y"]),
        ("assertFalse(x != y)", AssertionKind::Eq, &["x", "y"]),
        ("assertTrue(!(x == y))", AssertionKind::Ne, &["x", "y"]),
        ("assertTrue(x < y)", AssertionKind::OrderLt, &["x", "y"]),
        ("assertTrue(x <= y)", AssertionKind::OrderLe, &["x", "y"]),
        ("assertTrue(x > y)", AssertionKind::OrderLt, &["y", "x"]),
        ("assertTrue(x >= y)", AssertionKind::OrderLe, &["y", "x"]),
        ("assertTrue(contains(x, y))", AssertionKind::TruePred, &["x", "y"]),
        ("assertFalse(contains(x, y))", AssertionKind::FalsePred, &["x", "y"]),
        ("assertTrue(b)", AssertionKind::TruePred, &["b"]),
        ("assertTrue(x < y && y < z)", AssertionKind::TruePred, &["x < y", "y < z"]),
    ];
    for (src, kind, operands) in table {
        let class = format!("class T {{\n    @Test\n    void t() {{\n        {src};\n    }}\n}}\n");
        let t = parse_test_class_syntax("t.mini", &class).unwrap();
        let stmt = &t.decl.methods[0].body.stmts[0];
        assert!(matches!(stmt.kind, StmtKind::Assert { .. }));
        let n = normalize_assertion(stmt).unwrap();
        let got: Vec<String> = n.operands.iter().map(|e| print_expr(e)).collect();
        assert_eq!((n.kind, got.as_slice()), (*kind, &operands.iter().map(|s| s.to_string()).collect::<Vec<_>>()[..]), "{src}");
    }
}
