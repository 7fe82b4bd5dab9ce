//! Cellular automata on the full shift: local rules, windows, powers and
//! permutativity.

pub mod pattern;
pub mod permutative;
pub mod rule;

pub use pattern::{iterate, local_apply, Pattern};
pub use permutative::{determined_coordinates, is_permutative, is_permutative_at, PermutativityReport};
pub use rule::{compose, compose_tables, is_prime, power, DerivedDomain, LocalRule, PowerResult, RuleBody, TABLE_CAP};
