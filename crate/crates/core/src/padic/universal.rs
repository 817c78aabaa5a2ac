use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use super::{PadicError, PadicNumber};
use crate::Rational;

/// Default bound on the Λ-degree of a [`UniversalScalar`].
pub const DEFAULT_LAMBDA_CAP: usize = 4;

/// An element of ℚ_p[Λ], Λ = log(p) kept formal.
///
/// `coeffs[i]` is the coefficient of Λ^i; trailing zero coefficients are
/// dropped. The empty polynomial with `prime == 0` is the zero that has not
/// been tied to a prime yet; it adopts the prime of whatever it is combined
/// with.
#[derive(Clone)]
pub struct UniversalScalar {
    prime: u32,
    coeffs: Vec<PadicNumber>,
    cap: usize,
}

impl UniversalScalar {
    pub fn zero() -> Self {
        Self { prime: 0, coeffs: Vec::new(), cap: DEFAULT_LAMBDA_CAP }
    }

    pub fn zero_for(prime: u32) -> Self {
        Self { prime, ..Self::zero() }
    }

    pub fn constant(c: PadicNumber) -> Self {
        let mut s = Self { prime: c.prime(), coeffs: alloc::vec![c], cap: DEFAULT_LAMBDA_CAP };
        s.trim();
        s
    }

    /// The formal variable Λ, its coefficient known to relative precision `prec`.
    pub fn lambda(prime: u32, prec: u32) -> Result<Self, PadicError> {
        let one = PadicNumber::one(prime, prec)?;
        Ok(Self { prime, coeffs: alloc::vec![PadicNumber::zero(prime), one], cap: DEFAULT_LAMBDA_CAP })
    }

    /// Builds `Σ coeffs[i] Λ^i`, rejecting degrees above `cap`.
    pub fn from_coeffs(prime: u32, coeffs: Vec<PadicNumber>, cap: usize) -> Result<Self, PadicError> {
        let mut s = Self { prime, coeffs, cap };
        s.trim();
        if let Some(d) = s.degree() {
            if d > cap {
                return Err(PadicError::LambdaDegreeOverflow { degree: d, cap });
            }
        }
        Ok(s)
    }

    pub fn with_cap(mut self, cap: usize) -> Result<Self, PadicError> {
        if let Some(d) = self.degree() {
            if d > cap {
                return Err(PadicError::LambdaDegreeOverflow { degree: d, cap });
            }
        }
        self.cap = cap;
        Ok(self)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// The prime, or 0 for an unbound zero.
    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    /// Coefficient of Λ^i (zero past the degree).
    pub fn coeff(&self, i: usize) -> PadicNumber {
        self.coeffs.get(i).copied().unwrap_or(PadicNumber::zero(self.prime))
    }

    pub fn constant_term(&self) -> PadicNumber {
        self.coeff(0)
    }

    /// `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicNumber::is_zero)
    }

    /// Whether every coefficient of `self − other` vanishes to working precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }

    /// Evaluates at Λ = `c`. A ring homomorphism ℚ_p[Λ] → ℚ_p.
    pub fn specialize(&self, c: &PadicNumber) -> PadicNumber {
        let mut acc = PadicNumber::zero(self.prime.max(c.prime()));
        for a in self.coeffs.iter().rev() {
            acc = acc * *c + *a;
        }
        acc
    }

    /// d/dΛ as a polynomial.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.scale_rational(&Rational::from_integer((i as i64).into())))
            .collect();
        let mut s = Self { prime: self.prime, coeffs, cap: self.cap };
        s.trim();
        s
    }

    fn bind(&self, other: &Self) -> u32 {
        match (self.prime, other.prime) {
            (0, q) => q,
            (p, 0) => p,
            (p, q) => {
                assert_eq!(p, q, "mixing universal scalars over different primes");
                p
            }
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PadicError> {
        let prime = self.bind(other);
        let cap = self.cap.min(other.cap);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self { prime, coeffs: Vec::new(), cap });
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = alloc::vec![PadicNumber::zero(prime); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + *a * *b;
            }
        }
        Self::from_coeffs(prime, coeffs, cap)
    }

    pub fn scale_padic(&self, c: &PadicNumber) -> Self {
        let prime = if self.prime == 0 { c.prime() } else { self.prime };
        let mut s = Self { prime, coeffs: self.coeffs.iter().map(|a| *a * *c).collect(), cap: self.cap };
        s.trim();
        s
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut s = Self {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|a| a.scale_rational(r)).collect(),
            cap: self.cap,
        };
        s.trim();
        s
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.shift(k)).collect(), ..self.clone() }
    }

    /// Multiplies by Λ.
    pub fn mul_lambda(&self) -> Result<Self, PadicError> {
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let mut coeffs = alloc::vec![PadicNumber::zero(self.prime)];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_coeffs(self.prime, coeffs, self.cap)
    }

    fn zip_with(self, other: Self, f: impl Fn(PadicNumber, PadicNumber) -> PadicNumber) -> Self {
        let prime = self.bind(&other);
        let cap = self.cap.max(other.cap);
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = PadicNumber::zero(prime);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(zero);
                let b = other.coeffs.get(i).copied().unwrap_or(zero);
                f(a, b)
            })
            .collect();
        let mut s = Self { prime, coeffs, cap };
        s.trim();
        s
    }
}

/// The branch derivative `d/dΛ` evaluated at Λ = 0: the Λ-linear coefficient.
pub fn derive_at_zero(x: &UniversalScalar) -> PadicNumber {
    x.coeff(1)
}

impl Default for UniversalScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for UniversalScalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.coeffs.is_empty() || self.prime == other.prime)
    }
}

impl Eq for UniversalScalar {}

impl Add for UniversalScalar {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for UniversalScalar {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for UniversalScalar {
    type Output = Self;

    fn neg(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }
}

impl From<PadicNumber> for UniversalScalar {
    fn from(c: PadicNumber) -> Self {
        Self::constant(c)
    }
}

impl fmt::Debug for UniversalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UniversalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})Λ")?,
                _ => write!(f, "({c})Λ^{i}")?,
            }
        }
        Ok(())
    }
}
