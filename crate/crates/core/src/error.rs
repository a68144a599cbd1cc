use num_bigint::{BigInt, BigUint};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("side {name} must be a positive integer")]
    DegenerateSide { name: char },
    #[error("grid must have {expected_rows} rows of {expected_cols} entries")]
    GridShape { expected_rows: usize, expected_cols: usize },
    #[error("grid entry {value} exceeds the bound {cap}")]
    GridValueOutOfRange { value: u32, cap: u32 },
    #[error("grid entry {value} at ({k},{l}) violates monotonicity")]
    NonMonotoneGrid { k: usize, l: usize, value: u32 },
    #[error("count must be at least 1")]
    ZeroCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("workers must be at least 1")]
    NoWorkers,
    /// A matrix in the sum had a negative determinant. Every valid term is
    /// a product of path counts, so this signals a convention error.
    #[error("negative determinant {value} for {matrix}{index} at {x} {y}")]
    NegativeDeterminant {
        matrix: char,
        index: usize,
        x: String,
        y: String,
        value: BigInt,
    },
    #[error("inexact division in {formula}: {numerator} / {denominator}")]
    Inexact {
        formula: &'static str,
        numerator: BigUint,
        denominator: BigUint,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("oracle scale exceeded: {what} estimate {estimate} above limit {limit}")]
    ScaleExceeded {
        what: &'static str,
        estimate: BigUint,
        limit: BigUint,
    },
}
