use thiserror::Error;

/// Errors produced by tensor construction, unfolding, splitting and rank analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for mode {mode}: valid range is 1..={bound}")]
    IndexOutOfRange {
        mode: usize,
        index: usize,
        bound: usize,
    },

    #[error("multi-index has {index_len} components but tensor order is {order}")]
    IndexArity { index_len: usize, order: usize },

    #[error("data length {actual} does not match dimension product {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension list is empty")]
    EmptyDims,

    #[error("mode {mode} has dimension 0; every dimension must be at least 1")]
    ZeroDim { mode: usize },

    #[error("invalid split point {split} for order-{order} tensor: valid range is 1..={max}", max = order - 1)]
    InvalidSplit { split: usize, order: usize },

    #[error("permutation {perm:?} is not a bijection on 1..={order}")]
    InvalidPermutation { perm: Vec<usize>, order: usize },

    #[error("permutation has length {perm_len} but tensor order is {order}")]
    PermutationArity { perm_len: usize, order: usize },

    #[error("column count mismatch: left operand has {left} columns, right has {right}")]
    ColumnMismatch { left: usize, right: usize },

    #[error("factor matrix for mode {mode} has {actual} columns, expected {expected}")]
    FactorColumns {
        mode: usize,
        expected: usize,
        actual: usize,
    },

    #[error("no valid mode split: tensor order must be at least 2")]
    NoValidSplit,

    #[error("exact split enumeration is limited to 32 modes, got {0}")]
    TooManyModes(usize),

    #[error("dimension product overflows 64 bits")]
    ProductOverflow,

    #[error("SVD did not converge for {rows}x{cols} matrix")]
    SvdFailed { rows: usize, cols: usize },

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("constructed rank must be at least 1")]
    InvalidRank,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("value count mismatch: expected {expected} scalars, found {actual}")]
    ValueCount { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
