//! Symbolic proofs of a/b-power-freeness for morphisms whose run lengths are
//! linear in a and b.

pub mod form;
pub mod region;
pub mod prover;
pub mod table;
pub mod unequal;
pub mod word;

pub use form::{ExtForm, LinearForm, RationalInterval, Q};
pub use region::{Obstacle, Region};
pub use word::{conj4r_morphism, SymLetter, SymWord, SymbolicMorphism};
pub use prover::{lf_compare, sym_factor_table, sym_locating_length, sym_take, sym_verify_free, ProverOptions, SymbolicProof};
pub use unequal::{sym_unequal, Verdict};
