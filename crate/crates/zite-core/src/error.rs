use thiserror::Error;

/// Errors produced by the core numerical routines.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument is outside the documented domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A root bracket could not be established for a Bessel zero.
    #[error("failed to bracket Bessel zero j_{{{p},{q}}}")]
    BracketFailure { p: u32, q: u32 },

    /// The stiffness matrix is not positive definite (Cholesky failed).
    #[error("stiffness matrix is not positive definite; check basis and coefficients")]
    IndefiniteStiffness,

    /// Every reduced eigenvalue fell below the rank tolerance.
    #[error("no eigenvalue exceeded the rank tolerance; spectrum is empty")]
    EmptySpectrum,

    /// A root search found fewer roots than requested.
    #[error("found only {found} roots of {requested} requested in the search window")]
    InsufficientRoots { requested: usize, found: usize },

    /// A coefficient family, regime, or method is not available on this domain.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// A query value lies outside the representable range of a fit or table.
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type CoreResult<T> = Result<T, CoreError>;
