//! Browser demo: coupling analysis, mutants with diffs, and the retain rule.
//!
//! Every export takes and returns strings (JSON on success, a message on
//! error) so the page needs no bindings beyond the generated glue.

use mtcforge_core::code_model::resolve_method_spec;
use mtcforge_core::coupling::{analyze_coupling, CoupledPair, CouplingConfig};
use mtcforge_core::minilang::{parse_program, MethodRef, Program};
use mtcforge_core::validation::{decide as decide_rule, enumerate_mutants, mutant_diff, operator_name, retain_against, MutantRate, Operator};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn program(source: &str) -> Result<Program, String> {
    parse_program(&[("input.mini", source)])
        .map_err(|ds| ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))
}

fn method(program: &Program, spec: &str) -> Result<MethodRef, String> {
    let found = resolve_method_spec(program, spec).map_err(|e| e.to_string())?;
    match found.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(format!("`{spec}` is overloaded; add the parameter types, e.g. `{spec}(int)`")),
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// The bundled AES corpus, concatenated, to start the page with.
#[wasm_bindgen]
pub fn sample() -> String {
    [
        include_str!("../../core/corpus/aes/src/AESCodec.mini"),
        include_str!("../../core/corpus/aes/src/Cipher.mini"),
        include_str!("../../core/corpus/aes/src/SecretKey.mini"),
    ]
    .join("\n")
}

/// Coupled pairs of `target` (`Class.name` or `Class.name(int)`), as JSON.
#[wasm_bindgen]
pub fn analyze(source: &str, target: &str) -> Result<String, String> {
    let p = program(source)?;
    let t = method(&p, target)?;
    let pairs = analyze_coupling(&p, &t, &CouplingConfig::default()).map_err(|e| e.to_string())?;
    Ok(pretty(&pairs))
}

/// Every well-typed mutant of the pair, with a unified diff each.
#[wasm_bindgen]
pub fn mutants(source: &str, target: &str, candidate: &str) -> Result<String, String> {
    let p = program(source)?;
    let pair = CoupledPair { target: method(&p, target)?, candidate: method(&p, candidate)?, features: vec![] };
    let out: Vec<Value> = enumerate_mutants(&p, &pair)
        .iter()
        .map(|m| {
            json!({
                "id": m.id,
                "operator": operator_name(m.operator),
                "method": m.method.to_string(),
                "line": m.line,
                "before": m.diff_token.0,
                "after": m.diff_token.1,
                "diff": mutant_diff(&p, m),
            })
        })
        .collect();
    Ok(pretty(&out))
}

/// The retain rule for pass rate `p` on the original against the pass rates
/// on each mutant.
#[wasm_bindgen]
pub fn decide(p: f64, p_primes: &[f64]) -> Result<String, String> {
    if let Some(bad) = std::iter::once(p).chain(p_primes.iter().copied()).find(|x| !(0.0..=1.0).contains(x)) {
        return Err(format!("pass rates lie in [0, 1], got {bad}"));
    }
    let rates: Vec<MutantRate> = p_primes
        .iter()
        .enumerate()
        .map(|(i, &q)| MutantRate { id: format!("m{:03}", i + 1), operator: Operator::AOR, p_prime: q })
        .collect();
    let (decision, reason) = decide_rule(p, &rates);
    let per_mutant: Vec<Value> =
        rates.iter().map(|r| json!({ "id": r.id, "pPrime": r.p_prime, "passes": retain_against(p, r.p_prime) })).collect();
    Ok(pretty(&json!({ "decision": decision, "reason": reason, "perMutant": per_mutant })))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = r#"
class Box {
    int value;

    void put(int v) {
        value = v;
    }

    int take() {
        int v = value;
        value = 0;
        return v;
    }
}
"#;

    #[test]
    fn analyze_reports_the_shared_field() {
        let out: Value = serde_json::from_str(&analyze(SRC, "Box.put").unwrap()).unwrap();
        let pairs = out.as_array().unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0]["candidate"]["name"], "take");
        assert!(analyze(SRC, "Box.nothing").is_err());
        assert!(analyze("class {", "Box.put").is_err());
    }

    #[test]
    fn mutants_carry_diffs() {
        let out: Value = serde_json::from_str(&mutants(SRC, "Box.put", "Box.take").unwrap()).unwrap();
        let ms = out.as_array().unwrap();
        assert!(!ms.is_empty());
        assert!(ms.iter().all(|m| m["diff"].as_str().unwrap().contains("\n-")));
        assert!(ms.iter().any(|m| m["operator"] == "SDL" && m["before"] == "value = v;"));
    }

    #[test]
    fn sample_is_the_aes_corpus() {
        let out: Value = serde_json::from_str(&analyze(&sample(), "AESCodec.encryptText").unwrap()).unwrap();
        assert!(out.as_array().unwrap().iter().any(|p| p["candidate"]["name"] == "decryptText"));
        let ms: Value = serde_json::from_str(&mutants(&sample(), "AESCodec.encryptText", "AESCodec.decryptText").unwrap()).unwrap();
        assert!(!ms.as_array().unwrap().is_empty());
    }

    #[test]
    fn decide_explains_the_rule() {
        let out: Value = serde_json::from_str(&decide(0.8, &[0.2, 0.8]).unwrap()).unwrap();
        assert_eq!(out["decision"], "FILTERED");
        assert_eq!(out["reason"], "p = p′ < 1.0 on mutant m002 (AOR): p=0.8, p′=0.8");
        assert_eq!(out["perMutant"][0]["passes"], true);
        let out: Value = serde_json::from_str(&decide(1.0, &[1.0]).unwrap()).unwrap();
        assert_eq!(out["decision"], "RETAINED");
        assert!(decide(1.5, &[]).is_err());
    }
}
