use crate::codes::CodeError;
use crate::perm::PermError;

/// Errors raised by the group-theoretic layers above `perm` and `codes`.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A search that the theory guarantees to succeed came back empty.
    #[error("search failed: {0}")]
    Search(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_prime(p: usize) -> Result<()> {
    if crate::codes::ring::is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u64))
    }
}
