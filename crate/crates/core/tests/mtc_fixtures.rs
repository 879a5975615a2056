// The checks live in oracles/ so the CLI acceptance harness can call them too.
#[path = "oracles/mtc_fixtures.rs"]
mod checks;

#[test]
fn positive_and_negative_fixtures() {
    checks::positive_and_negative_fixtures();
}
