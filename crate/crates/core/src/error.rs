//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Validation,
    /// A configured size guard was exceeded.
    Guard,
    /// An internal consistency check failed.
    Invariant,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mixed scalar modes: {0} and {1}")]
    MixedModes(String, String),

    #[error("degenerate lattice")]
    Degenerate,

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("clifford context mismatch")]
    ContextMismatch,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("group closure exceeded {0} elements")]
    ClosureBound(usize),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::GuardExceeded(_) | Error::ClosureBound(_) => ErrorKind::Guard,
            Error::InvariantViolation(_) => ErrorKind::Invariant,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::GuardExceeded(msg.into())
    }
}
