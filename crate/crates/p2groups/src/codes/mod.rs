//! Codes over `Z_n` and finite fields: cyclic codes, monomial maps, invariant
//! codes, CRT components, Hensel lifts and code chains.

pub mod chain;
pub mod cyclic;
pub mod invariant;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod ring;

pub use chain::{chain_of_code, code_from_chain, crt_decompose, hensel_lift, ChainGroup, CrtComponent};
pub use cyclic::{degeneracy, induced_code, is_degenerate, is_invariant, multiplier, shift, CodeSummary, CyclicCode};
pub use invariant::{
    expected_invariant_count, invariant_cyclic_codes, irreducible_factors, unit_closure, unit_subgroups, FieldCyclicCode,
};
pub use module::{permute_vector, Submodule};
pub use monomial::{is_invariant_monomial, monomial_aut, AutMode, MonomialMap};
pub use poly::{ModPoly, Poly};
pub use ring::{Gf, Ring, Zn};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
