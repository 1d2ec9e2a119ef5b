use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data (edge lists, model files, generator specs).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An argument violated an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A motif definition violated the structural invariants.
    #[error("invalid motif: {0}")]
    InvalidMotif(String),

    /// The requested computation is outside the supported regime
    /// (e.g. variance with T != delta or nonconstant rates).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A 64-bit instance count overflowed.
    #[error("instance count overflowed 64 bits")]
    CountOverflow,

    /// A statistic has no defined value on the given input.
    #[error("undefined result: {0}")]
    Undefined(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
