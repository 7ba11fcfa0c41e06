//! Permutations, permutation groups and block systems.

mod blocks;
mod chain;
mod group;
mod permutation;

pub use blocks::BlockSystem;
pub use group::PermGroup;
pub use permutation::{PointEncoding, Permutation};


#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a bijection")]
    NotBijection,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("enumeration limit {limit} exceeded (group order {order})")]
    LimitExceeded { limit: u128, order: u128 },
    #[error("{0}")]
    Search(String),
}
