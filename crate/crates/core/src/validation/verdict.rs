use serde::{Deserialize, Serialize};

use super::mutation::{Mutant, Operator};
use crate::minilang::{run_test_class, Limits, OutcomeKind, Program, TestClass};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PassRate {
    pub rate: f64,
    pub passed: usize,
    pub total: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Fraction of test methods that pass. A class that does not compile has rate
/// 0; ASSERT_FAIL, RUNTIME_ERROR and TIMEOUT all count as failures.
pub fn pass_rate(program: &Program, test: &TestClass, limits: &Limits) -> PassRate {
    let run = run_test_class(program, test, limits);
    if let Some(err) = run.class_error {
        return PassRate { rate: 0.0, passed: 0, total: 0, note: Some(format!("{}: {}", err.kind, err.message)) };
    }
    let total = run.total();
    let passed = run.outcomes.values().filter(|o| o.kind == OutcomeKind::Pass).count();
    let rate = if total == 0 { 0.0 } else { passed as f64 / total as f64 };
    PassRate { rate, passed, total, note: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Retained,
    Filtered,
    RetainedNoMutants,
}

impl Decision {
    pub fn is_retained(self) -> bool {
        matches!(self, Decision::Retained | Decision::RetainedNoMutants)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MutantRate {
    pub id: String,
    pub operator: Operator,
    pub p_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationVerdict {
    pub p: f64,
    pub per_mutant: Vec<MutantRate>,
    pub decision: Decision,
    pub reason: String,
}

fn approx(a: f64, b: f64) -> bool {
    (a - b).abs() < EPS
}

/// Retain against one mutant: `p > p′`, or `p = p′ = 1`.
pub fn retain_against(p: f64, p_prime: f64) -> bool {
    p > p_prime + EPS || (approx(p, 1.0) && approx(p_prime, 1.0))
}

fn fmt_rate(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').map(|t| format!("{t}.0")).unwrap_or_else(|| s.to_string())
}

/// The retain/filter rule. Retained iff the per-mutant clause holds for every
/// mutant; the reason names the first mutant that breaks it.
pub fn decide(p: f64, per_mutant: &[MutantRate]) -> (Decision, String) {
    if per_mutant.is_empty() {
        return (Decision::RetainedNoMutants, "no mutants; conservatively retained".into());
    }
    if let Some(m) = per_mutant.iter().find(|m| !retain_against(p, m.p_prime)) {
        let why = if approx(p, m.p_prime) { "p = p′ < 1.0" } else { "p < p′" };
        return (
            Decision::Filtered,
            format!("{why} on mutant {} ({:?}): p={}, p′={}", m.id, m.operator, fmt_rate(p), fmt_rate(m.p_prime)),
        );
    }
    let equal = per_mutant.iter().filter(|m| approx(m.p_prime, 1.0) && approx(p, 1.0)).count();
    let greater = per_mutant.len() - equal;
    let n = |k: usize| if k == 1 { "1 mutant".to_string() } else { format!("{k} mutants") };
    let reason = match (greater, equal) {
        (g, 0) => format!("p > p′ on all {}", n(g)),
        (0, e) => format!("p = p′ = 1.0 on all {}", n(e)),
        (g, e) => format!("p > p′ on {}; p = p′ = 1.0 on {}", n(g), n(e)),
    };
    (Decision::Retained, reason)
}

/// Runs `test` on the program and on every mutant (in parallel, at most
/// `workers` threads) and applies [`decide`].
pub fn validate(test: &TestClass, program: &Program, mutants: &[Mutant], limits: &Limits, workers: usize) -> ValidationVerdict {
    let p = pass_rate(program, test, limits).rate;
    let rates = crate::par_map(mutants, workers, |m| pass_rate(&m.program, test, limits).rate);
    let per_mutant: Vec<MutantRate> = mutants
        .iter()
        .zip(rates)
        .map(|(m, r)| MutantRate { id: m.id.clone(), operator: m.operator, p_prime: r })
        .collect();
    let (decision, reason) = decide(p, &per_mutant);
    ValidationVerdict { p, per_mutant, decision, reason }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(p_prime: f64) -> Vec<MutantRate> {
        vec![MutantRate { id: "m001".into(), operator: Operator::SDL, p_prime }]
    }

    #[test]
    fn worked_examples() {
        assert_eq!(decide(0.8, &one(0.2)).0, Decision::Retained);
        let (d, reason) = decide(0.2, &one(1.0));
        assert_eq!(d, Decision::Filtered);
        assert_eq!(reason, "p < p′ on mutant m001 (SDL): p=0.2, p′=1.0");
        assert_eq!(decide(1.0, &one(1.0)).0, Decision::Retained);
        assert_eq!(decide(0.5, &one(0.5)).0, Decision::Filtered);
        assert_eq!(decide(0.5, &[]).0, Decision::RetainedNoMutants);
    }

    #[test]
    fn rate_formatting() {
        assert_eq!(fmt_rate(0.8), "0.8");
        assert_eq!(fmt_rate(1.0), "1.0");
        assert_eq!(fmt_rate(0.0), "0.0");
        assert_eq!(fmt_rate(2.0 / 3.0), "0.667");
    }
}
