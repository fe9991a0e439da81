use thiserror::Error;

/// Errors raised by the integration engine.
///
/// Verification failures are reported as data, never through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("ground size mismatch: {left} legs vs {right} legs")]
    GroundSizeMismatch { left: usize, right: usize },

    #[error("matrix is singular: row {row} depends on the rows before it")]
    Singular { row: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("colored words differ across factors")]
    WordMismatch,

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache record rejected: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
