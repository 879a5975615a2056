use serde::{Deserialize, Serialize};

use super::corpus::Corpus;
use crate::minilang::{print_method, walk_block_exprs, Callee, MethodRef};

pub const DEFAULT_MAX_EXAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvocationExample {
    pub test_method_source: String,
    pub invoked_ref: MethodRef,
    pub origin_path: String,
}

/// Collects `@Test` methods calling either pair member, at most
/// `max_per_method` per member, scanning test files in path order.
///
/// A test that calls both members is listed once, under the first member.
/// Files whose path is in `exclude` are skipped.
pub fn retrieve_invocation_examples(
    corpus: &Corpus,
    pair: (&MethodRef, &MethodRef),
    max_per_method: usize,
    exclude: &[String],
) -> Vec<InvocationExample> {
    let mut out: Vec<InvocationExample> = Vec::new();
    let mut seen: Vec<(&str, &str)> = Vec::new();
    for member in [pair.0, pair.1] {
        let mut taken = 0;
        'files: for test in corpus.tests.iter().filter(|t| !exclude.contains(&t.path)) {
            for m in test.class.test_methods() {
                if taken == max_per_method {
                    break 'files;
                }
                let mut calls = false;
                walk_block_exprs(&m.body, &mut |e| {
                    if matches!(test.info.calls.get(&e.id), Some(Callee::Method(r)) if r == member) {
                        calls = true;
                    }
                });
                if !calls || seen.contains(&(test.path.as_str(), m.name.as_str())) {
                    continue;
                }
                seen.push((test.path.as_str(), m.name.as_str()));
                out.push(InvocationExample {
                    test_method_source: print_method(m),
                    invoked_ref: member.clone(),
                    origin_path: test.path.clone(),
                });
                taken += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(tests: &[(&str, &str)]) -> Corpus {
        let src = vec![(
            "src/C.mini".to_string(),
            "class C { static int a(int x) { return x; } static int b(int x) { return x; } }".to_string(),
        )];
        let tests: Vec<(String, String)> = tests.iter().map(|(p, t)| (p.to_string(), t.to_string())).collect();
        Corpus::from_sources(&src, &tests).unwrap()
    }

    fn refs() -> (MethodRef, MethodRef) {
        (MethodRef::new("C", "a", vec![crate::minilang::TypeName::Int]), MethodRef::new("C", "b", vec![crate::minilang::TypeName::Int]))
    }

    #[test]
    fn caps_at_three_per_member() {
        let body: String = (1..=5).map(|i| format!("@Test void t{i}() {{ C.a({i}); }} ")).collect();
        let c = corpus(&[("test/T.mini", &format!("class T {{ {body} }}"))]);
        let (a, b) = refs();
        let ex = retrieve_invocation_examples(&c, (&a, &b), 3, &[]);
        assert_eq!(ex.len(), 3);
        assert!(ex[0].test_method_source.contains("C.a(1)"));
        assert!(ex.iter().all(|e| e.invoked_ref == a));
    }

    #[test]
    fn one_per_member_and_exclusion() {
        let c = corpus(&[
            ("test/A.mini", "class A { @Test void x() { C.a(1); } }"),
            ("test/B.mini", "class B { @Test void y() { C.b(1); } }"),
        ]);
        let (a, b) = refs();
        let ex = retrieve_invocation_examples(&c, (&a, &b), 3, &[]);
        assert_eq!(ex.len(), 2);
        assert_eq!(ex[1].origin_path, "test/B.mini");
        let ex = retrieve_invocation_examples(&c, (&a, &b), 3, &["test/A.mini".to_string()]);
        assert_eq!(ex.len(), 1);
    }

    #[test]
    fn no_tests_no_examples() {
        let c = corpus(&[]);
        let (a, b) = refs();
        assert!(retrieve_invocation_examples(&c, (&a, &b), 3, &[]).is_empty());
    }
}
