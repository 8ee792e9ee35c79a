use thiserror::Error;

/// Errors raised by matrix, sequence and graph operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} entries for {what}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("matrix order must be at least {min}, got {actual}")]
    OrderTooSmall { min: usize, actual: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("unsupported bandwidth {0}; only 1 and 2 are supported")]
    UnsupportedBandwidth(usize),
    #[error("matrix is not tridiagonal")]
    NotTridiagonal,
    #[error("matrix is not in pentadiagonal (i, i+2) form: offset-1 entry {index} is nonzero")]
    NotPentadiagonalForm { index: usize },
    #[error("negative exponent {0} is not supported")]
    NegativeExponent(f64),
    #[error("exponent must be finite, got {0}")]
    NonFiniteExponent(f64),
    #[error("negative entry {value} at ({row}, {col}) cannot be raised to non-integer power {exponent}")]
    NegativeBase {
        row: usize,
        col: usize,
        value: f64,
        exponent: f64,
    },
    #[error("negative entry {value} at ({row}, {col}); a nonnegative matrix is required")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix is not infinitely divisible: {0}")]
    NotInfinitelyDivisible(String),
    #[error("exponent {0} is outside the open interval (0, 1)")]
    ExponentOutOfRange(f64),
    #[error("graph is not chordal; chordless cycle {witness:?}")]
    NotChordal { witness: Vec<usize> },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex subset must not be empty")]
    EmptySubset,
    #[error("invalid edge {0}-{1}: self-loops are not allowed")]
    SelfLoop(usize, usize),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
