//! Lexicographically least words avoiding fractional powers, the uniform
//! morphisms that generate them, and explicit and symbolic checks that those
//! morphisms are power-free.

pub mod catalog;
pub mod error;
pub mod morphism;
pub mod symbolic;
pub mod miner;
pub mod verifier;
pub mod word;

pub use error::{Error, Result};
pub use word::{
    compare_lex, find_forbidden_factor, find_power_factor, first_occurrences, generate_lexleast,
    generate_values, is_fractional_power, power_suffix, AvoidMode, Fraction, Generator, Letter,
    Word,
};
pub use morphism::{CheckResult, ExplicitMorphism};
