use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("form ({a}, {b}, {c}) is not primitive")]
    NotPrimitive { a: i64, b: i64, c: i64 },
    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),
    #[error("precision of {0} bits is below the 64-bit floor")]
    PrecisionTooLow(usize),
    #[error("coefficient rounding failed for D = {disc} at {prec} bits (worst residual {residual:.3e})")]
    RoundingFailure { disc: i64, prec: usize, residual: f64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too small (must exceed 3)")]
    PrimeTooSmall(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("modulus polynomial must be nonconstant")]
    ConstantModulus,
    #[error("polynomials over different fields: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),
    #[error("prime {p} exceeds the exhaustive root-listing bound {bound}")]
    ListingBoundExceeded { p: u64, bound: u64 },
    #[error("ell = {ell} is not an odd prime dividing D = {disc}")]
    BadOddEll { disc: i64, ell: u64 },
    #[error("D = {0} is odd; the 2-adic condition needs 4 | D")]
    OddDiscriminant(i64),
    #[error("norm-equation preconditions violated: {0}")]
    NormPrecondition(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
