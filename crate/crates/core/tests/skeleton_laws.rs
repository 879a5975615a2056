// The checks live in oracles/ so the CLI acceptance harness can call them too.
#[path = "oracles/skeleton_laws.rs"]
mod checks;

#[test]
fn similarity_laws_on_500_random_pairs() {
    checks::similarity_laws_on_500_random_pairs();
}

#[test]
fn pair_order_is_irrelevant() {
    checks::pair_order_is_irrelevant();
}

#[test]
fn normalization_table() {
    checks::normalization_table();
}
