use thiserror::Error;

/// Errors produced by the coverage-depth library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field order {0} out of supported range")]
    FieldTooLarge(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("element {value} out of range for GF({q})")]
    ElementOutOfRange { value: u64, q: u32 },

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("generator has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("index {index} out of range for length {len}")]
    InvalidIndex { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration needs {needed} items, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
