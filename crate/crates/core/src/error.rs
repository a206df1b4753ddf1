use thiserror::Error;

/// Failure modes shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (only 2 and 4)")]
    BadDim(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("complete positivity violated: {0}")]
    CompletePositivity(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("operation requires omega = 0, got {0}")]
    OmegaNotZero(f64),
    #[error("degenerate ellipsoid: axes {0:?} contracted to zero")]
    DegenerateEllipsoid(Vec<usize>),
    #[error("no separability transition found (state may stay nonseparable)")]
    NoRootBracket,
    #[error("invalid channel config: {0}")]
    Config(String),
    #[error("bloch vector length {0} exceeds 1")]
    BlochTooLong(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
