//! Per-method static facts and invocation-example retrieval.

pub mod corpus;
pub mod examples;
pub mod facts;

pub use corpus::{Corpus, CorpusError, CorpusTest};
pub use examples::{retrieve_invocation_examples, InvocationExample, DEFAULT_MAX_EXAMPLES};
pub use facts::{extract_all_facts, extract_facts, tokenize_name, FactsConfig, FactsError, FactsRecord, MethodFacts};

use crate::minilang::{MethodRef, Program};

/// Resolves `Class.name` (every overload) or `Class.name(int, string)` (one
/// overload) against a program.
pub fn resolve_method_spec(program: &Program, spec: &str) -> Result<Vec<MethodRef>, FactsError> {
    let spec = spec.trim();
    let (head, params) = match spec.find('(') {
        Some(i) => (&spec[..i], Some(spec[i..].trim())),
        None => (spec, None),
    };
    let Some((class, name)) = head.rsplit_once('.') else {
        return Err(FactsError::UnknownMethod(spec.to_string()));
    };
    let found: Vec<MethodRef> = program
        .class(class)
        .map(|c| {
            c.methods_named(name)
                .map(|m| m.method_ref(class))
                .filter(|r| params.is_none_or(|p| r.to_string().ends_with(&p.replace(", ", ",").replace(',', ", "))))
                .collect()
        })
        .unwrap_or_default();
    if found.is_empty() {
        Err(FactsError::UnknownMethod(spec.to_string()))
    } else {
        Ok(found)
    }
}
