//! Truncated p-adic arithmetic over ℚ_p, extended by the formal branch
//! parameter Λ = log(p).
//!
//! [`PadicNumber`] tracks valuation and precision explicitly; [`UniversalScalar`]
//! is a polynomial in Λ with p-adic coefficients, the value ring of
//! universal-branch integrals. [`iwasawa_log`] is the universal logarithm and
//! [`derive_at_zero`] its branch derivative.

mod log;
mod number;
mod universal;

use core::fmt;

pub use log::{iwasawa_log, log_one_unit, teichmuller};
pub use number::{PadicNumber, INFINITE_VALUATION};
pub use universal::{derive_at_zero, UniversalScalar, DEFAULT_LAMBDA_CAP};

pub(crate) use number::modulus;

use crate::ErrorKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicError {
    NotPrime(u64),
    ZeroDenominator,
    InvalidPrecision(u32),
    /// `p^digits` does not fit the 64-bit working modulus.
    PrecisionTooLarge {
        prime: u32,
        digits: u32,
    },
    DivisionByZero,
    LogOfZero,
    LambdaDegreeOverflow {
        degree: usize,
        cap: usize,
    },
}

impl PadicError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            PadicError::PrecisionTooLarge { .. } | PadicError::LambdaDegreeOverflow { .. } => ErrorKind::Overflow,
            _ => ErrorKind::Precondition,
        }
    }
}

impl fmt::Display for PadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicError::NotPrime(p) => write!(f, "{p} is not prime"),
            PadicError::ZeroDenominator => write!(f, "zero denominator"),
            PadicError::InvalidPrecision(n) => write!(f, "precision must be at least 1, got {n}"),
            PadicError::PrecisionTooLarge { prime, digits } => {
                write!(f, "{prime}^{digits} exceeds the 64-bit working modulus")
            }
            PadicError::DivisionByZero => write!(f, "division by a p-adic zero"),
            PadicError::LogOfZero => write!(f, "logarithm of zero"),
            PadicError::LambdaDegreeOverflow { degree, cap } => {
                write!(f, "Λ-degree {degree} exceeds the configured cap {cap}")
            }
        }
    }
}

impl core::error::Error for PadicError {}

/// The p-adic expansion of `numerator/denominator` to relative precision
/// `precision`.
pub fn make_padic(p: u32, numerator: i64, denominator: i64, precision: u32) -> Result<PadicNumber, PadicError> {
    use num_bigint::BigInt;
    PadicNumber::from_ratio(p, &BigInt::from(numerator), &BigInt::from(denominator), precision)
}

#[cfg(test)]
mod tests;
