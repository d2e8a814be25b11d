use thiserror::Error;

/// Errors raised by the exact arithmetic, lemma checks and the decider.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("exponent {0} must be odd")]
    EvenExponent(u32),
    #[error("exponent {0} is below the minimum {1}")]
    ExponentTooSmall(u32, u32),
    #[error("ell = {0} is outside the supported range: {1}")]
    EllOutOfRange(u32, &'static str),
    #[error("Faulhaber evaluation of S_{m}({k}) is not integral: {value}")]
    NonIntegralPowerSum { k: String, m: u32, value: String },
    #[error("polynomial precondition violated: {0}")]
    Polynomial(&'static str),
    #[error("parameter value makes a denominator vanish: {0}")]
    VanishingDenominator(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("w = {0} must be even")]
    OddCenter(String),
    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
