//! Shared test support: the conference fixture and its mutants, seeded random
//! model generators and brute-force oracles.

pub mod fixtures;
pub mod gen;
pub mod oracle;

pub use fixtures::{conference, mutant, BROKEN_SOURCE, CONFERENCE_SOURCE, MUTANTS};
pub use gen::{add_valid_privilege, cleaned, random_model, rng, GenParams};
