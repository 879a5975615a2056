//! MTC property checks, mutation, pass rates and the retain/filter rule.

pub mod mutation;
pub mod properties;
pub(crate) mod slice;
pub mod verdict;

pub use mutation::{enumerate_mutants, generate_mutants, mutant_diff, operator_name, Mutant, Operator, DEFAULT_MUTANT_CAP};
pub use properties::{check_mtc_properties, MtcPropertyReport};
pub use verdict::{decide, pass_rate, retain_against, validate, Decision, MutantRate, PassRate, ValidationVerdict};
