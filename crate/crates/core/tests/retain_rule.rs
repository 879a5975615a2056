// The checks live in oracles/ so the CLI acceptance harness can call them too.
#[path = "oracles/retain_rule.rs"]
mod checks;

#[test]
fn truth_table() {
    checks::truth_table();
}

#[test]
fn grid_of_fifths() {
    checks::grid_of_fifths();
}

#[test]
fn every_mutant_must_pass_the_rule() {
    checks::every_mutant_must_pass_the_rule();
}
