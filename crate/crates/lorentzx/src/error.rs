use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cone dimensions must satisfy p >= 1 and q >= 1, got p = {p}, q = {q}")]
    BadDims { p: usize, q: usize },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("vector is not unit length: ||u|| = {norm}")]
    NotUnit { norm: f64 },

    #[error("index {index} out of range (< {bound}) in {context}")]
    IndexOutOfRange {
        index: usize,
        bound: usize,
        context: &'static str,
    },

    #[error("matrix exponential overflow: ||tA|| = {norm:.3e} exceeds the scaling budget")]
    ExpOverflow { norm: f64 },

    #[error("singular linear system in {0}")]
    SingularSystem(&'static str),

    #[error("{algorithm} failed to converge after {iterations} iterations")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
    },

    #[error("complementarity pair invalid: {0}")]
    InvalidPair(&'static str),

    #[error("{0}")]
    Unsupported(&'static str),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
