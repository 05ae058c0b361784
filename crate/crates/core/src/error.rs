use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("item index {index} out of range for {n} items")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("item {0} compared with itself")]
    SelfComparison(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("non-finite score at index {0}")]
    NonFinite(usize),

    #[error("no comparisons available")]
    EmptyPool,

    #[error("comparison pool exhausted before the first iteration")]
    Exhausted,

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cell {cell}: {source}")]
    Cell { cell: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
