use thiserror::Error;

/// Errors surfaced by the structural API.
///
/// Numerical trouble inside a likelihood evaluation (indefinite covariance,
/// overflow, a diverging trajectory) is deliberately *not* an `Error`: those
/// paths soft-fail by returning a log-density of negative infinity so that a
/// sampler can treat the point as infeasible and move on. `Error` is reserved
/// for misuse that no amount of resampling can fix.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("optimization could not start: {0}")]
    InfeasibleStart(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
