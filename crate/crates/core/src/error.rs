use thiserror::Error;

/// Errors produced by the quantization library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid type point: {0}")]
    InvalidPoint(String),

    #[error("invalid lattice parameters: {0}")]
    InvalidLattice(String),

    #[error("index {index} out of range for lattice of {count} points")]
    IndexOutOfRange { index: String, count: String },

    #[error("glue vector index {index} out of range for m = {m}")]
    GlueIndexOutOfRange { index: usize, m: usize },

    #[error("no closed form for norm {0}")]
    UnsupportedNorm(crate::Norm),

    #[error("enumeration of {size} items exceeds the limit of {limit}")]
    EnumerationTooLarge { size: String, limit: u64 },

    #[error("rate budget of {budget} bits is too small (need at least {needed})")]
    BudgetTooSmall { budget: u32, needed: u32 },

    #[error("rate budget of {0} bits exceeds the representable denominator range")]
    BudgetTooLarge(u32),

    #[error("bad magic")]
    BadMagic,

    #[error("truncated blob: expected {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("trailing data: expected {expected} bytes, got {actual}")]
    TrailingData { expected: usize, actual: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
