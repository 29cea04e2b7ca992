use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix entry ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("matrix entry ({i}, {j}) is negative")]
    Negative { i: usize, j: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("diagonal entry ({i}, {i}) is not zero")]
    NonZeroDiagonal { i: usize },

    #[error("index {index} out of range for size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("not a permutation of [{n}]: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("trees share leaf {0}")]
    OverlappingLeaves(usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("need at least 2 objects, got {0}")]
    TooSmall(usize),
    #[error("instance too large for exhaustive search: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },
    #[error("input is not a strict pre-circular-Robinson matrix: {0}")]
    NotStrictPreCircularRobinson(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn not_strict(reason: impl Into<String>) -> Self {
        Error::NotStrictPreCircularRobinson(reason.into())
    }
}
