use thiserror::Error;

/// Errors produced by state validation, information measures and the
/// classical-quantum decomposition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M\u{2020}| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: most negative eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix trace is {trace} but must be 1")]
    TraceNotOne { trace: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("keep set must not be empty")]
    EmptyKeepSet,

    #[error("index {index} out of range ({limit} available)")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid subsystem partition: {0}")]
    OverlappingParts(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("state is not classical-quantum: {diagnostic} = {violation:.3e}")]
    NotClassicalQuantum { diagnostic: String, violation: f64 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("internal consistency violation: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("state file error: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
