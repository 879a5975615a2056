use mtcforge_core::validation::{decide, retain_against, Decision, MutantRate, Operator};

fn rates(ps: &[f64]) -> Vec<MutantRate> {
    ps.iter()
        .enumerate()
        .map(|(i, &p)| MutantRate { id: format!("m{:03}", i + 1), operator: Operator::AOR, p_prime: p })
        .collect()
}

/// The rule over exact fifths: retain iff p > p′, or both are 1.
fn oracle(p5: u32, q5: u32) -> bool {
    p5 > q5 || (p5 == 5 && q5 == 5)
}

pub fn truth_table() {
    // p > p′, p = p′ = 1, p < p′, p = p′ < 1
    assert!(retain_against(0.8, 0.2));
    assert!(retain_against(1.0, 1.0));
    assert!(!retain_against(0.2, 1.0));
    assert!(!retain_against(0.5, 0.5));
    assert!(!retain_against(0.0, 0.0));
    assert!(retain_against(1.0, 0.0));
}

pub fn grid_of_fifths() {
    for p5 in 0..=5u32 {
        for q5 in 0..=5u32 {
            // rates as the interpreter computes them: passed / total
            let (p, q) = (p5 as f64 / 5.0, q5 as f64 / 5.0);
            assert_eq!(retain_against(p, q), oracle(p5, q5), "p={p} p'={q}");
            let (d, _) = decide(p, &rates(&[q]));
            assert_eq!(d.is_retained(), oracle(p5, q5), "p={p} p'={q}");
            // and the 0.2-step grid built by accumulation, which is not exact
            let acc = |k: u32| (0..k).fold(0.0, |x, _| x + 0.2);
            assert_eq!(retain_against(acc(p5), acc(q5)), oracle(p5, q5), "accumulated p={p5}/5 p'={q5}/5");
        }
    }
}

pub fn every_mutant_must_pass_the_rule() {
    assert_eq!(decide(0.8, &rates(&[0.2, 0.0, 0.6])).0, Decision::Retained);
    let (d, reason) = decide(0.8, &rates(&[0.2, 0.8, 1.0]));
    assert_eq!(d, Decision::Filtered);
    assert_eq!(reason, "p = p′ < 1.0 on mutant m002 (AOR): p=0.8, p′=0.8");
    let (d, reason) = decide(1.0, &rates(&[1.0, 0.4]));
    assert_eq!(d, Decision::Retained);
    assert_eq!(reason, "p > p′ on 1 mutant; p = p′ = 1.0 on 1 mutant");
    assert_eq!(decide(0.0, &[]).0, Decision::RetainedNoMutants);
}
