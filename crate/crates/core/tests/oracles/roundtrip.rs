//! print ∘ parse is the identity on printed programs, checked on random
//! syntax trees (not necessarily well typed).

use std::collections::BTreeSet;
use std::time::Instant;

use mtcforge_core::minilang::parser::parse_classes;
use mtcforge_core::minilang::printer::print_classes;
use mtcforge_core::minilang::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const NAMES: &[&str] = &["a", "b", "x1", "text", "key", "abc_d", "Zed", "encryptText", "i"];
const CLASSES: &[&str] = &["H", "AESCodec", "K2"];

fn span() -> Span {
    Span::new(0, 0)
}

fn e(kind: ExprKind) -> Expr {
    Expr { id: 0, span: span(), kind }
}

fn s(kind: StmtKind) -> Stmt {
    Stmt { id: 0, span: span(), kind }
}

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(NAMES).prop_map(String::from)
}

fn class_name() -> impl Strategy<Value = String> {
    prop::sample::select(CLASSES).prop_map(String::from)
}

fn ty() -> impl Strategy<Value = TypeName> {
    let leaf = prop_oneof![
        Just(TypeName::Int),
        Just(TypeName::Bool),
        Just(TypeName::Str),
        class_name().prop_map(TypeName::Class),
    ];
    leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(TypeName::list_of))
}

fn bin_op() -> impl Strategy<Value = BinOp> {
    prop::sample::select(BinOp::ALL.to_vec())
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-100_000i64..100_000).prop_map(|v| e(ExprKind::Int(v))),
        any::<bool>().prop_map(|b| e(ExprKind::Bool(b))),
        "[ -~\t\n\"\\\\é]{0,8}".prop_map(|v| e(ExprKind::Str(v))),
        Just(e(ExprKind::Null)),
        Just(e(ExprKind::This)),
        name().prop_map(|n| e(ExprKind::Ident(n))),
        class_name().prop_map(|c| e(ExprKind::New { class: c })),
    ];
    leaf.prop_recursive(4, 48, 3, |inner| {
        let boxed = inner.clone().prop_map(Box::new);
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..3).prop_map(|v| e(ExprKind::List(v))),
            (boxed.clone(), name()).prop_map(|(t, n)| e(ExprKind::Field { target: t, name: n })),
            (prop_oneof![Just(UnaryOp::Neg), Just(UnaryOp::Not)], boxed.clone())
                .prop_map(|(op, o)| e(ExprKind::Unary { op, operand: o })),
            (bin_op(), boxed.clone(), boxed.clone()).prop_map(|(op, l, r)| e(ExprKind::Binary { op, lhs: l, rhs: r })),
            (prop::option::of(boxed.clone()), name(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(r, n, a)| e(ExprKind::Call { receiver: r, name: n, args: a })),
            (boxed.clone(), boxed).prop_map(|(t, i)| e(ExprKind::Index { target: t, index: i })),
        ]
    })
}

fn assign_target() -> impl Strategy<Value = Expr> {
    prop_oneof![
        name().prop_map(|n| e(ExprKind::Ident(n))),
        (expr(), name()).prop_map(|(t, n)| e(ExprKind::Field { target: Box::new(t), name: n })),
    ]
}

fn assertion() -> impl Strategy<Value = Stmt> {
    prop::sample::select(AssertKind::ALL.to_vec()).prop_flat_map(|kind| {
        prop::collection::vec(expr(), kind.arity()).prop_map(move |args| s(StmtKind::Assert { kind, args }))
    })
}

fn stmt() -> impl Strategy<Value = Stmt> {
    let simple = prop_oneof![
        (ty(), name(), expr()).prop_map(|(ty, name, init)| s(StmtKind::VarDecl { ty, name, init })),
        (assign_target(), expr()).prop_map(|(target, value)| s(StmtKind::Assign { target, value })),
        prop::option::of(expr()).prop_map(|r| s(StmtKind::Return(r))),
        expr().prop_map(|x| s(StmtKind::Expr(x))),
        expr().prop_map(|x| s(StmtKind::Throw(x))),
        assertion(),
    ];
    simple.prop_recursive(3, 24, 3, |inner| {
        let block = prop::collection::vec(inner, 0..3).prop_map(|stmts| Block { stmts });
        prop_oneof![
            (expr(), block.clone(), prop::option::of(block.clone()))
                .prop_map(|(cond, t, el)| s(StmtKind::If { cond, then_block: t, else_block: el })),
            (expr(), block).prop_map(|(cond, body)| s(StmtKind::While { cond, body })),
        ]
    })
}

fn method() -> impl Strategy<Value = MethodDecl> {
    (
        name(),
        prop::collection::vec((name(), ty()), 0..3),
        prop::option::of(ty()),
        any::<bool>(),
        any::<bool>(),
        prop::collection::vec(stmt(), 0..4),
    )
        .prop_map(|(n, params, ret, is_static, test, stmts)| MethodDecl {
            name: n,
            params: params.into_iter().map(|(name, ty)| Param { name, ty }).collect(),
            ret: ret.unwrap_or(TypeName::Unit),
            is_static,
            annotations: if test { BTreeSet::from(["Test".to_string()]) } else { BTreeSet::new() },
            body: Block { stmts },
            span: span(),
        })
}

fn field() -> impl Strategy<Value = FieldDecl> {
    (name(), ty(), any::<bool>(), prop::option::of(expr()))
        .prop_map(|(name, ty, is_static, init)| FieldDecl { name, ty, is_static, init, span: span() })
}

fn class() -> impl Strategy<Value = ClassDecl> {
    (class_name(), prop::collection::vec(field(), 0..3), prop::collection::vec(method(), 0..3))
        .prop_map(|(name, fields, methods)| ClassDecl { name, fields, methods, span: span() })
}

pub fn print_parse_round_trip_on_1000_random_trees() {
    let start = Instant::now();
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    runner
        .run(&prop::collection::vec(class(), 1..3), |classes| {
            let printed = print_classes(&classes);
            let mut next_id = 0;
            let parsed = parse_classes("random.mini", &printed, &mut next_id)
                .map_err(|d| TestCaseError::fail(format!("{d:?}\n{printed}")))?;
            prop_assert_eq!(&parsed, &classes, "{}", printed);
            prop_assert_eq!(print_classes(&parsed), printed);
            Ok(())
        })
        .unwrap();
    assert!(start.elapsed().as_secs() < 30, "took {:?}", start.elapsed());
}

pub fn negative_literals_and_minus_signs() {
    let src = "class A {\n    void f() {\n        int x = -5;\n        x = -(5.y);\n        x = 1 - -5;\n        x = -(-5);\n        x = -(-a);\n    }\n}\n";
    let mut next_id = 0;
    let parsed = parse_classes("neg.mini", src, &mut next_id).unwrap();
    assert_eq!(print_classes(&parsed), src);
    let StmtKind::Assign { value, .. } = &parsed[0].methods[0].body.stmts[3].kind else { panic!() };
    assert_eq!(value.kind, ExprKind::Unary { op: UnaryOp::Neg, operand: Box::new(e(ExprKind::Int(-5))) });
}
