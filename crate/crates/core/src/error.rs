use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// point at the offending input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("derivative in u of a series with u-order 0")]
    EmptyOrder,

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: u32, found: u32 },

    #[error("series is not invertible: {0}")]
    PoleAtOrigin(String),

    #[error("non-real coefficient {value} at monomial {monomial}")]
    RealnessViolation { monomial: String, value: String },

    #[error("pole at evaluation point: {0}")]
    Pole(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("resource budget exceeded: {what} (bound {bound})")]
    Budget { what: String, bound: u64 },

    #[error("unsupported insertion weight: {0}")]
    UnsupportedWeight(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
