//! The mini-language: a small statically-typed, class-based language with
//! `@Test` methods and JUnit-style assertions.

pub mod ast;
pub mod diag;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod typeck;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use ast::*;
pub use diag::{DiagCode, Diagnostic};
pub use interp::{run_test_class, Limits, OutcomeKind, TestClassRun, TestOutcome, Value};
pub use printer::{print_class, print_expr, print_method, print_program, print_test_class};
pub use typeck::{Callee, FieldRef, IdentRes, TypeInfo};

impl Program {
    /// Type-checks `classes` and builds a program. `origins` maps declaration
    /// keys to source locations and is only used for diagnostics.
    pub fn new(classes: Vec<ClassDecl>, origins: BTreeMap<String, SourceOrigin>) -> Result<Program, Vec<Diagnostic>> {
        let lookup = |class: &str| origins.get(class).map(|o| o.path.clone()).unwrap_or_else(|| "<unknown>".into());
        let info = typeck::check_program_classes(&classes, &lookup)?;
        Ok(Program { classes, origins, info: Arc::new(info) })
    }

    /// Same origins, different class bodies (used for mutants).
    pub fn with_classes(&self, classes: Vec<ClassDecl>) -> Result<Program, Vec<Diagnostic>> {
        Program::new(classes, self.origins.clone())
    }

    pub fn origin_of_method(&self, mref: &MethodRef) -> Option<&SourceOrigin> {
        self.origins.get(&mref.to_string())
    }
}

/// Parses and type-checks a set of `(path, source)` files as one program.
/// Node ids are assigned in the order the files are given.
pub fn parse_program<P: AsRef<str>, S: AsRef<str>>(sources: &[(P, S)]) -> Result<Program, Vec<Diagnostic>> {
    let mut next_id = 0;
    let mut classes = Vec::new();
    let mut origins = BTreeMap::new();
    let mut errors = Vec::new();
    for (path, src) in sources {
        let path = path.as_ref();
        match parser::parse_classes(path, src.as_ref(), &mut next_id) {
            Ok(parsed) => {
                for c in parsed {
                    origins.insert(c.name.clone(), SourceOrigin { path: path.to_string(), line: c.span.line });
                    for m in &c.methods {
                        origins
                            .entry(m.method_ref(&c.name).to_string())
                            .or_insert(SourceOrigin { path: path.to_string(), line: m.span.line });
                    }
                    classes.push(c);
                }
            }
            Err(d) => errors.push(d),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Program::new(classes, origins)
}

/// Parses a test class without checking it against a program.
pub fn parse_test_class_syntax(path: &str, src: &str) -> Result<TestClass, Diagnostic> {
    let mut next_id = 0;
    let mut classes = parser::parse_classes(path, src, &mut next_id)?;
    if classes.len() != 1 {
        return Err(Diagnostic::new(
            path,
            classes.get(1).map(|c| c.span.line).unwrap_or(1),
            DiagCode::ParseError,
            format!("expected exactly one class, found {}", classes.len()),
        ));
    }
    Ok(TestClass::new(classes.remove(0)))
}

/// Parses a test class and type-checks it against `program`.
pub fn parse_test_class(program: &Program, path: &str, src: &str) -> Result<TestClass, Vec<Diagnostic>> {
    let test = parse_test_class_syntax(path, src).map_err(|d| vec![d])?;
    typeck::check_test_class(program, &test, path)?;
    Ok(test)
}

/// Type-checks an already-built test class against `program`.
pub fn check_test_class(program: &Program, test: &TestClass, path: &str) -> Result<(), Vec<Diagnostic>> {
    typeck::check_test_class(program, test, path).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn program(src: &str) -> Program {
        parse_program(&[("p.mini", src)]).unwrap_or_else(|d| panic!("{}", diag::render_all(&d)))
    }

    fn run(prog: &Program, test: &str) -> TestClassRun {
        let t = parse_test_class(prog, "T.mini", test).unwrap_or_else(|d| panic!("{}", diag::render_all(&d)));
        run_test_class(prog, &t, &Limits::default())
    }

    const COUNTER: &str = r#"
class Counter {
    static int created = 0;
    int value;

    static Counter make(int start) {
        Counter c = new Counter();
        c.value = start;
        created = created + 1;
        return c;
    }

    int bump() {
        value = value + 1;
        return value;
    }

    int div(int d) {
        return value / d;
    }

    int spin() {
        while (true) {
            value = value + 1;
        }
        return 0;
    }
}
"#;

    #[test]
    fn outcomes_cover_every_kind() {
        let p = program(COUNTER);
        let r = run(
            &p,
            r#"
class T {
    @Test
    void ok() {
        Counter c = Counter.make(4);
        assertEquals(5, c.bump());
        assertEquals(1, Counter.created);
    }

    @Test
    void bad() {
        assertEquals(7, Counter.make(1).bump());
    }

    @Test
    void crash() {
        Counter.make(1).div(0);
    }

    @Test
    void forever() {
        Counter.make(1).spin();
    }
}
"#,
        );
        assert!(r.class_error.is_none());
        assert_eq!(r.outcomes["ok"].kind, OutcomeKind::Pass);
        assert_eq!(r.outcomes["bad"].kind, OutcomeKind::AssertFail);
        assert!(r.outcomes["bad"].message.contains("expected 7 but was 2"));
        assert_eq!(r.outcomes["crash"].kind, OutcomeKind::RuntimeError);
        assert_eq!(r.outcomes["forever"].kind, OutcomeKind::Timeout);
    }

    #[test]
    fn statics_reset_between_tests() {
        let p = program(COUNTER);
        let r = run(
            &p,
            "class T { @Test void a() { Counter.make(0); assertEquals(1, Counter.created); } @Test void b() { Counter.make(0); assertEquals(1, Counter.created); } }",
        );
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn compile_error_is_class_level() {
        let p = program(COUNTER);
        let t = parse_test_class_syntax("T.mini", "class T { @Test void a() { Counter.nope(); } }").unwrap();
        let r = run_test_class(&p, &t, &Limits::default());
        assert_eq!(r.class_error.unwrap().kind, OutcomeKind::CompileError);
        assert!(r.outcomes.is_empty());
    }

    #[test]
    fn builtins_and_strings() {
        let p = program("class U { static string twice(string s) { return s + s; } }");
        let r = run(
            &p,
            r#"class T { @Test void a() {
                assertEquals("abab", U.twice("ab"));
                assertEquals(3, len([1, 2, 3]));
                assertEquals("cba", reverse("abc"));
                assertEquals("bc", substring("abc", 1, 3));
                assertEquals("AB", fromCharCodes([65, 66]));
                assertEquals(97, charCode("a", 0));
                assertTrue(contains(append([1], 2), 2));
                assertEquals("x1true", "x" + 1 + true);
                assertNotEquals(null, "a");
                assertEquals(-3, min(-3, 4));
            } }"#,
        );
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn null_dereference_is_runtime_error() {
        let p = program(COUNTER);
        let r = run(&p, "class T { @Test void a() { Counter c = null; c.bump(); } }");
        assert_eq!(r.outcomes["a"].kind, OutcomeKind::RuntimeError);
    }

    #[test]
    fn deep_recursion_is_runtime_error() {
        let p = program("class R { static int f(int n) { return f(n + 1); } }");
        let r = run(&p, "class T { @Test void a() { R.f(0); } }");
        assert_eq!(r.outcomes["a"].kind, OutcomeKind::RuntimeError);
        assert!(r.outcomes["a"].message.contains("stack overflow"));
    }

    #[test]
    fn multiple_files_and_errors() {
        let err = parse_program(&[("a.mini", "class A { }"), ("b.mini", "class B { void f( }")]).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].path, "b.mini");
        assert_eq!(err[0].code, DiagCode::ParseError);
        let err = parse_program(&[("a.mini", "class A { int f() { return g(); } }")]).unwrap_err();
        assert_eq!(err[0].code, DiagCode::UnresolvedSymbol);
        assert_eq!(err[0].symbol.as_deref(), Some("g"));
    }
}
