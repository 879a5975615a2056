use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::extract::extract_syntax;
use crate::coupling::CoupledPair;
use crate::llm::{ChatProvider, ChatSession};
use crate::minilang::{print_test_class, typeck, walk_block_exprs, Callee, MethodDecl, Program, TestClass};

pub const DEFAULT_M: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedMTC {
    pub test_class: TestClass,
    pub m: usize,
    pub degraded: bool,
    pub notes: AmplifyNotes,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AmplifyNotes {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn amplification_request(candidate: &TestClass, m: usize) -> String {
    format!(
        "Review the conversation and the metamorphic test case below.\n```\n{}```\n\
Apply the same metamorphic relation to {m} new inputs: boundary values, random data and special characters. \
Reply with one test class named `{}` in one code block, containing the test methods MTC_input1 to MTC_input{m}, \
one new input each, every one of them calling both methods of the pair.",
        print_test_class(candidate),
        candidate.name()
    )
}

/// `MTC_input<k>` with `1 <= k <= m`.
pub fn input_index(name: &str, m: usize) -> Option<usize> {
    let k: usize = name.strip_prefix("MTC_input")?.parse().ok()?;
    (name == format!("MTC_input{k}") && (1..=m).contains(&k)).then_some(k)
}

fn calls_both(program: &Program, class: &TestClass, method: &MethodDecl, pair: &CoupledPair) -> bool {
    let mut probe = class.clone();
    probe.decl.methods.retain(|x| !x.is_test());
    probe.decl.methods.push(method.clone());
    let Ok(info) = typeck::check_test_class(program, &probe, "amplified.mini") else { return false };
    let method = probe.decl.methods.last().unwrap();
    let mut seen = BTreeSet::new();
    walk_block_exprs(&method.body, &mut |e| {
        if let Some(Callee::Method(r)) = info.calls.get(&e.id) {
            seen.insert(r.clone());
        }
    });
    seen.contains(&pair.target) && seen.contains(&pair.candidate)
}

/// Asks the generation session for `m` more inputs under the same MR and
/// keeps the well-formed `MTC_input<k>` methods. Fewer than two survivors
/// degrade to the original test renamed `MTC_input1`.
pub fn amplify(
    candidate: &TestClass,
    session: &mut ChatSession,
    provider: &dyn ChatProvider,
    program: &Program,
    pair: &CoupledPair,
    m: usize,
) -> AmplifiedMTC {
    let mut notes = AmplifyNotes::default();
    let parsed = session
        .send(provider, &amplification_request(candidate, m))
        .map_err(|e| e.to_string())
        .and_then(|reply| extract_syntax(&reply).map_err(|e| e.to_string()));
    match parsed {
        Ok(reply_class) => {
            let mut kept: Vec<MethodDecl> = Vec::new();
            let mut ks = BTreeSet::new();
            for method in reply_class.decl.methods.iter().filter(|x| x.is_test()) {
                let ok = input_index(&method.name, m).is_some_and(|k| !ks.contains(&k))
                    && calls_both(program, &reply_class, method, pair);
                if ok {
                    ks.insert(input_index(&method.name, m).unwrap());
                    kept.push(method.clone());
                } else {
                    notes.dropped.push(method.name.clone());
                }
            }
            if kept.len() >= 2 {
                let mut class = reply_class.clone();
                class.decl.methods.retain(|x| !x.is_test());
                class.decl.methods.extend(kept);
                if typeck::check_test_class(program, &class, "amplified.mini").is_ok() {
                    let n = class.test_methods().count();
                    return AmplifiedMTC { test_class: class, m: n, degraded: false, notes };
                }
                notes.error = Some("amplified class does not type-check".into());
            } else {
                notes.error = Some(format!("only {} usable amplified tests", kept.len()));
            }
        }
        Err(e) => notes.error = Some(e),
    }
    AmplifiedMTC { test_class: degrade(candidate), m: 1, degraded: true, notes }
}

/// The candidate's first test method alone, renamed `MTC_input1`.
pub fn degrade(candidate: &TestClass) -> TestClass {
    let mut class = candidate.clone();
    let first = class.test_methods().next().cloned();
    class.decl.methods.retain(|x| !x.is_test());
    if let Some(mut t) = first {
        t.name = "MTC_input1".into();
        class.decl.methods.push(t);
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naming_rule() {
        assert_eq!(input_index("MTC_input1", 10), Some(1));
        assert_eq!(input_index("MTC_input10", 10), Some(10));
        assert_eq!(input_index("MTC_input11", 10), None);
        assert_eq!(input_index("MTC_input0", 10), None);
        assert_eq!(input_index("MTC_input01", 10), None);
        assert_eq!(input_index("testExtra", 10), None);
    }
}
