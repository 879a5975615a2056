//! Canonical pretty-printer.
//!
//! Layout: 4-space indent, one statement per line, braces on every block,
//! fields before methods, a blank line before each method and between
//! classes. Parentheses are emitted only where precedence requires them, so
//! flipping one operator changes exactly one token of the output.

use std::fmt::Write;

use super::ast::*;

const INDENT: &str = "    ";

pub fn print_program(program: &Program) -> String {
    print_classes(&program.classes)
}

pub fn print_classes(classes: &[ClassDecl]) -> String {
    let mut out = String::new();
    for (i, c) in classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&print_class(c));
    }
    out
}

pub fn print_test_class(test: &TestClass) -> String {
    print_class(&test.decl)
}

pub fn print_class(class: &ClassDecl) -> String {
    let mut out = format!("class {} {{\n", class.name);
    for f in &class.fields {
        out.push_str(INDENT);
        if f.is_static {
            out.push_str("static ");
        }
        write!(out, "{} {}", f.ty, f.name).unwrap();
        if let Some(init) = &f.init {
            write!(out, " = {}", print_expr(init)).unwrap();
        }
        out.push_str(";\n");
    }
    for (i, m) in class.methods.iter().enumerate() {
        if i > 0 || !class.fields.is_empty() {
            out.push('\n');
        }
        print_method_into(&mut out, m, 1);
    }
    out.push_str("}\n");
    out
}

/// A single method at top-level indentation (used for prompts and examples).
pub fn print_method(method: &MethodDecl) -> String {
    let mut out = String::new();
    print_method_into(&mut out, method, 0);
    out
}

/// Method signature line without body, e.g. `static int f(int a)`.
pub fn print_signature(method: &MethodDecl) -> String {
    let mut out = String::new();
    for a in &method.annotations {
        write!(out, "@{a} ").unwrap();
    }
    if method.is_static {
        out.push_str("static ");
    }
    write!(out, "{} {}(", method.ret, method.name).unwrap();
    for (i, p) in method.params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{} {}", p.ty, p.name).unwrap();
    }
    out.push(')');
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str(INDENT);
    }
}

fn print_method_into(out: &mut String, m: &MethodDecl, level: usize) {
    for a in &m.annotations {
        indent(out, level);
        writeln!(out, "@{a}").unwrap();
    }
    indent(out, level);
    if m.is_static {
        out.push_str("static ");
    }
    write!(out, "{} {}(", m.ret, m.name).unwrap();
    for (i, p) in m.params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{} {}", p.ty, p.name).unwrap();
    }
    out.push_str(") ");
    print_block(out, &m.body, level);
    out.push('\n');
}

/// Prints `{ ... }` where the opening brace continues the current line and
/// the closing brace is indented at `level` (no trailing newline).
fn print_block(out: &mut String, block: &Block, level: usize) {
    out.push_str("{\n");
    for s in &block.stmts {
        print_stmt(out, s, level + 1);
    }
    indent(out, level);
    out.push('}');
}

pub fn print_stmt_line(stmt: &Stmt) -> String {
    let mut out = String::new();
    print_stmt(&mut out, stmt, 0);
    out
}

fn print_stmt(out: &mut String, stmt: &Stmt, level: usize) {
    indent(out, level);
    match &stmt.kind {
        StmtKind::VarDecl { ty, name, init } => writeln!(out, "{ty} {name} = {};", print_expr(init)).unwrap(),
        StmtKind::Assign { target, value } => {
            writeln!(out, "{} = {};", print_expr(target), print_expr(value)).unwrap()
        }
        StmtKind::If { .. } => {
            print_if(out, stmt, level);
            out.push('\n');
        }
        StmtKind::While { cond, body } => {
            write!(out, "while ({}) ", print_expr(cond)).unwrap();
            print_block(out, body, level);
            out.push('\n');
        }
        StmtKind::Return(None) => out.push_str("return;\n"),
        StmtKind::Return(Some(e)) => writeln!(out, "return {};", print_expr(e)).unwrap(),
        StmtKind::Expr(e) => writeln!(out, "{};", print_expr(e)).unwrap(),
        StmtKind::Throw(e) => writeln!(out, "throw {};", print_expr(e)).unwrap(),
        StmtKind::Assert { kind, args } => {
            writeln!(out, "{}({});", kind.builtin_name(), print_args(args)).unwrap();
        }
    }
}

fn print_if(out: &mut String, stmt: &Stmt, level: usize) {
    let StmtKind::If { cond, then_block, else_block } = &stmt.kind else { unreachable!() };
    write!(out, "if ({}) ", print_expr(cond)).unwrap();
    print_block(out, then_block, level);
    if let Some(else_block) = else_block {
        out.push_str(" else ");
        match else_block.stmts.as_slice() {
            [only] if matches!(only.kind, StmtKind::If { .. }) => print_if(out, only, level),
            _ => print_block(out, else_block, level),
        }
    }
}

fn print_args(args: &[Expr]) -> String {
    args.iter().map(print_expr).collect::<Vec<_>>().join(", ")
}

const PREC_UNARY: u8 = 7;
const PREC_POSTFIX: u8 = 8;

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary { op, .. } => op.precedence(),
        ExprKind::Unary { .. } => PREC_UNARY,
        _ => PREC_POSTFIX,
    }
}

/// True when a preceding `-` would change how the printed form lexes: a
/// leading integer folds into a negative literal, a leading `-` makes `--`.
fn unsafe_after_minus(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Unary { op: UnaryOp::Neg, .. } => true,
        ExprKind::Field { target, .. } | ExprKind::Index { target, .. } => unsafe_after_minus(target),
        ExprKind::Call { receiver: Some(r), .. } => unsafe_after_minus(r),
        _ => false,
    }
}

fn wrap(e: &Expr, needs: bool) -> String {
    if needs {
        format!("({})", print_expr(e))
    } else {
        print_expr(e)
    }
}

pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Int(v) => v.to_string(),
        ExprKind::Bool(b) => b.to_string(),
        ExprKind::Str(s) => quote(s),
        ExprKind::Null => "null".into(),
        ExprKind::List(items) => format!("[{}]", print_args(items)),
        ExprKind::Ident(name) => name.clone(),
        ExprKind::This => "this".into(),
        ExprKind::Field { target, name } => format!("{}.{name}", wrap(target, prec(target) < PREC_POSTFIX)),
        ExprKind::Unary { op, operand } => {
            let needs = prec(operand) < PREC_UNARY || (*op == UnaryOp::Neg && unsafe_after_minus(operand));
            format!("{}{}", op.symbol(), wrap(operand, needs))
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let p = op.precedence();
            format!("{} {} {}", wrap(lhs, prec(lhs) < p), op.symbol(), wrap(rhs, prec(rhs) <= p))
        }
        ExprKind::Call { receiver: None, name, args } => format!("{name}({})", print_args(args)),
        ExprKind::Call { receiver: Some(r), name, args } => {
            format!("{}.{name}({})", wrap(r, prec(r) < PREC_POSTFIX), print_args(args))
        }
        ExprKind::New { class } => format!("new {class}()"),
        ExprKind::Index { target, index } => {
            format!("{}[{}]", wrap(target, prec(target) < PREC_POSTFIX), print_expr(index))
        }
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => write!(out, "\\u{{{:x}}}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_classes;
    use super::*;

    fn roundtrip(src: &str) -> String {
        let mut id = 0;
        let classes: Vec<ClassDecl> = parse_classes("t", src, &mut id).unwrap();
        let printed = print_classes(&classes);
        let mut id2 = 0;
        let again: Vec<ClassDecl> =
            parse_classes("t", &printed, &mut id2).unwrap();
        assert_eq!(classes, again, "round trip changed the tree:\n{printed}");
        printed
    }

    #[test]
    fn empty_class_layout() {
        assert_eq!(roundtrip("class A { }"), "class A {\n}\n");
    }

    #[test]
    fn canonical_layout() {
        let printed = roundtrip(
            "class A { static int n = 1; int f(int x) { if (x > 0) { return x; } else if (x == 0) { return n; } else { while (true) { x = x + 1; } } return 0; } }",
        );
        let expected = "\
class A {
    static int n = 1;

    int f(int x) {
        if (x > 0) {
            return x;
        } else if (x == 0) {
            return n;
        } else {
            while (true) {
                x = x + 1;
            }
        }
        return 0;
    }
}
";
        assert_eq!(printed, expected);
    }

    #[test]
    fn parens_only_where_needed() {
        let p = roundtrip("class A { void f() { g((a + b) * c, a - (b - c), a - b - c, -(5), - -5, -(5).x, !(a && b)); } }");
        assert!(p.contains("g((a + b) * c, a - (b - c), a - b - c, -(5), -(-5), -(5.x), !(a && b));"), "{p}");
    }

    #[test]
    fn string_quoting() {
        let p = roundtrip(r#"class A { string s = "a\"b\\c\n\u{7}"; }"#);
        assert!(p.contains(r#""a\"b\\c\n\u{7}""#));
    }
}
