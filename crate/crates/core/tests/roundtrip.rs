// The checks live in oracles/ so the CLI acceptance harness can call them too.
#[path = "oracles/roundtrip.rs"]
mod checks;

#[test]
fn print_parse_round_trip_on_1000_random_trees() {
    checks::print_parse_round_trip_on_1000_random_trees();
}

#[test]
fn negative_literals_and_minus_signs() {
    checks::negative_literals_and_minus_signs();
}
