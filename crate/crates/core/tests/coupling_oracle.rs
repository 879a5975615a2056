// The checks live in oracles/ so the CLI acceptance harness can call them too.
#[path = "oracles/coupling_oracle.rs"]
mod checks;

#[test]
fn coupling_matches_brute_force_on_1000_classes() {
    checks::coupling_matches_brute_force_on_1000_classes();
}
