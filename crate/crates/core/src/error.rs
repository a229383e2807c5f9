use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid shape {n1}x{n2}: both sides must be at least 1")]
    InvalidShape { n1: usize, n2: usize },

    #[error("point ({x}, {y}) lies outside the {n1}x{n2} grid")]
    PointOutOfRange { x: usize, y: usize, n1: usize, n2: usize },

    #[error("duplicate point ({x}, {y}) in configuration")]
    DuplicatePoint { x: usize, y: usize },

    #[error("particle count {m} is not in 0..={n}")]
    InvalidParticleCount { m: usize, n: usize },

    #[error("{what} of size {size} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, size: u128, limit: u128 },

    #[error("shape or particle count mismatch: {0}")]
    Mismatch(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("input contains non-finite values")]
    NonFinite,

    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("generator must be nonzero")]
    ZeroGenerator,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}
