use thiserror::Error;

/// Errors raised by construction and checking routines.
///
/// Input errors (bad data, violated preconditions) are kept apart from
/// `Internal`, which only fires when an identity that must hold by
/// construction is found to be false.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is not simple: {0}")]
    NonSimple(String),
    #[error("polytope is infeasible")]
    Infeasible,
    #[error("degenerate polytope data: {0}")]
    Degenerate(String),
    #[error("combinatorial type changed: {0}")]
    CombinatoricsChanged(String),
    #[error("operator is not nilpotent of order {0}")]
    NotNilpotent(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the caller's data rather than by a failed
    /// identity inside the library.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Verification(_) | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
