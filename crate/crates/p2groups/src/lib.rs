//! Transitive permutation groups of degree `p^2`.

pub mod cayley;
pub mod codes;
pub mod digraph;
pub mod error;
pub mod linear;
pub mod normalizers;
pub mod projective_modules;
pub mod wreath_cohom;
pub mod perm;
pub mod pgroups;
pub mod verify;

pub use error::{Error, Result};
