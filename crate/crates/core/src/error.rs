//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RangeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: relative deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not unitary: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("the pair of gates is not locally distinguishable for these parameters")]
    NotDistinguishable,

    #[error("optimizer failed to reach a certified bracket: {0}")]
    BracketFailed(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, RangeError>;
