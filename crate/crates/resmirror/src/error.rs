use thiserror::Error;

/// Errors raised by the exact kernels, the geometry rules and the front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("a denominator factor vanishes identically")]
    IdenticallySingular,
    #[error("two poles share the location {0}")]
    DuplicatePole(String),
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("invalid insertion: {0}")]
    InvalidInsertion(String),
    #[error("invalid comb type: {0}")]
    InvalidComb(String),
    #[error("exponential of a series with a nonzero affine part")]
    InvalidExp,
    #[error("classical pairing is singular")]
    SingularMetric,
    #[error("cache corruption: {0}")]
    CacheCorruption(String),
    #[error("negative exponent {0} on a polynomial")]
    NegativeExponent(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
