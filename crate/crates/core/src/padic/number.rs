use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::PadicError;
use crate::Rational;

/// Valuation sentinel carried by the distinguished (exact) zero.
pub const INFINITE_VALUATION: i64 = i64::MAX;

/// An element of ℚ_p known to finite precision.
///
/// A nonzero value is `p^val · unit` with `unit` a p-adic unit known modulo
/// `p^prec`, so the value itself is known modulo `p^(val + prec)`.
///
/// Two kinds of zero exist. The distinguished zero is exact and carries
/// [`INFINITE_VALUATION`]. A value that cancels to working precision becomes
/// `O(p^k)`: `unit = 0`, `prec = 0`, `val = k`, which records how far the
/// result is actually known.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u32,
    val: i64,
    unit: u64,
    prec: u32,
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k` if it fits in a u64.
pub(crate) fn checked_pow(p: u32, k: u32) -> Option<u64> {
    (p as u64).checked_pow(k)
}

pub(crate) fn modulus(p: u32, k: u32) -> Result<u64, PadicError> {
    checked_pow(p, k).ok_or(PadicError::PrecisionTooLarge { prime: p, digits: k })
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a unit modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inv_mod called on a non-unit");
    old_s.rem_euclid(m as i128) as u64
}

/// Splits `n` as `p^k · rest` with `p ∤ rest`. `n` must be nonzero.
pub(crate) fn split_p(mut n: u64, p: u32) -> (u32, u64) {
    let p = p as u64;
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (k, n)
}

fn split_p_big(n: &BigInt, p: u32) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

fn reduce_big(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue below a u64 modulus")
}

impl PadicNumber {
    /// Builds a nonzero element from raw parts, normalizing any p-factors out
    /// of `unit`.
    pub fn new(prime: u32, val: i64, unit: u64, prec: u32) -> Result<Self, PadicError> {
        if !is_prime(prime as u64) {
            return Err(PadicError::NotPrime(prime as u64));
        }
        if prec == 0 {
            return Err(PadicError::InvalidPrecision(0));
        }
        let m = modulus(prime, prec)?;
        let unit = unit % m;
        if unit == 0 {
            return Ok(Self::approx_zero(prime, val.saturating_add(prec as i64)));
        }
        let (k, rest) = split_p(unit, prime);
        Ok(Self { prime, val: val + k as i64, unit: rest, prec: prec - k })
    }

    /// The distinguished exact zero.
    pub const fn zero(prime: u32) -> Self {
        Self { prime, val: INFINITE_VALUATION, unit: 0, prec: 0 }
    }

    /// A value known only to be divisible by `p^abs_prec`.
    pub const fn approx_zero(prime: u32, abs_prec: i64) -> Self {
        Self { prime, val: abs_prec, unit: 0, prec: 0 }
    }

    pub fn one(prime: u32, prec: u32) -> Result<Self, PadicError> {
        Self::new(prime, 0, 1, prec)
    }

    pub fn from_integer(prime: u32, n: i64, prec: u32) -> Result<Self, PadicError> {
        Self::from_ratio(prime, &BigInt::from(n), &BigInt::one(), prec)
    }

    pub fn from_rational(prime: u32, r: &Rational, prec: u32) -> Result<Self, PadicError> {
        Self::from_ratio(prime, r.numer(), r.denom(), prec)
    }

    /// p-adic expansion of `num/den` to relative precision `prec`.
    pub fn from_ratio(prime: u32, num: &BigInt, den: &BigInt, prec: u32) -> Result<Self, PadicError> {
        if !is_prime(prime as u64) {
            return Err(PadicError::NotPrime(prime as u64));
        }
        if den.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        if prec == 0 {
            return Err(PadicError::InvalidPrecision(0));
        }
        let m = modulus(prime, prec)?;
        if num.is_zero() {
            return Ok(Self::zero(prime));
        }
        let (vn, un) = split_p_big(num, prime);
        let (vd, ud) = split_p_big(den, prime);
        let un = reduce_big(&un, m);
        let ud = reduce_big(&ud, m);
        let unit = mul_mod(un, inv_mod(ud, m), m);
        Ok(Self { prime, val: vn - vd, unit, prec })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// Relative precision; 0 for either kind of zero.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// `p^val · unit` for nonzero values; for zeros `unit == 0`.
    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// Valuation of a nonzero element; `None` for both kinds of zero.
    pub fn valuation(&self) -> Option<i64> {
        (self.unit != 0).then_some(self.val)
    }

    /// Exponent `k` such that the value is known modulo `p^k`; `None` for the
    /// exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        if self.is_exact_zero() {
            None
        } else if self.unit == 0 {
            Some(self.val)
        } else {
            Some(self.val + self.prec as i64)
        }
    }

    /// True for the exact zero and for values that vanish to working precision.
    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.unit == 0 && self.val == INFINITE_VALUATION
    }

    /// Lower bound on the valuation, with zeros reporting what is known.
    fn order(&self) -> i64 {
        self.val
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixing p-adic numbers over different primes");
    }

    pub fn checked_inv(&self) -> Result<Self, PadicError> {
        if self.unit == 0 {
            return Err(PadicError::DivisionByZero);
        }
        let m = modulus(self.prime, self.prec).expect("existing precision fits");
        Ok(Self { prime: self.prime, val: -self.val, unit: inv_mod(self.unit, m), prec: self.prec })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(*self * other.checked_inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        if exp == 0 {
            return Self { prime: self.prime, val: 0, unit: 1, prec: self.prec.max(1) };
        }
        if self.unit == 0 {
            return Self { val: self.val.saturating_mul(exp as i64), ..*self };
        }
        let m = modulus(self.prime, self.prec).expect("existing precision fits");
        Self { val: self.val * exp as i64, unit: pow_mod(self.unit, exp as u64, m), ..*self }
    }

    /// Multiplies by an exact rational without losing relative precision.
    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.prime);
        }
        if self.is_exact_zero() {
            return *self;
        }
        if self.unit == 0 {
            let (vn, _) = split_p_big(r.numer(), self.prime);
            let (vd, _) = split_p_big(r.denom(), self.prime);
            return Self::approx_zero(self.prime, self.val + vn - vd);
        }
        let factor = Self::from_rational(self.prime, r, self.prec).expect("existing precision fits");
        *self * factor
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return *self;
        }
        Self { val: self.val + k, ..*self }
    }

    /// Residue of the value modulo `p^digits`, for values of nonnegative valuation.
    pub fn residue(&self, digits: u32) -> Option<u64> {
        if self.unit == 0 {
            return Some(0);
        }
        if self.val < 0 {
            return None;
        }
        let m = modulus(self.prime, digits).ok()?;
        if self.val >= digits as i64 {
            return Some(0);
        }
        let scale = pow_mod(self.prime as u64, self.val as u64, m);
        Some(mul_mod(self.unit % m, scale, m))
    }

    /// Whether `self − other` vanishes to the precision both are known at.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }

    /// The value as an exact rational `p^val · unit` (the unit's least
    /// nonnegative representative). `None` for zeros.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.unit == 0 {
            return None;
        }
        let p = BigInt::from(self.prime);
        let u = BigInt::from(self.unit);
        let r = match self.val.cmp(&0) {
            Ordering::Less => Rational::new(u, num_traits::pow(p, (-self.val) as usize)),
            _ => Rational::from_integer(u * num_traits::pow(p, self.val as usize)),
        };
        Some(r)
    }

    /// Signed representative of the residue modulo `p^prec` if the value is a
    /// small integer (|n| < p^prec / 2). Used to read integer-valued outputs.
    pub fn to_small_integer(&self) -> Option<i64> {
        if self.unit == 0 {
            return Some(0);
        }
        if self.val < 0 {
            return None;
        }
        let abs = (self.val + self.prec as i64) as u32;
        let m = modulus(self.prime, abs).ok()?;
        let r = self.residue(abs)? as i128;
        let m = m as i128;
        let signed = if r > m / 2 { r - m } else { r };
        i64::try_from(signed).ok()
    }
}

impl Add for PadicNumber {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_exact_zero() {
            return rhs;
        }
        if rhs.is_exact_zero() {
            return self;
        }
        self.check_prime(&rhs);
        let p = self.prime;
        let abs = self.absolute_precision().unwrap().min(rhs.absolute_precision().unwrap());
        let low = self.order().min(rhs.order());
        if abs <= low {
            return Self::approx_zero(p, abs);
        }
        let digits = (abs - low) as u32;
        let m = modulus(p, digits).expect("digits bounded by an operand's precision");
        let lift = |x: &Self| -> u64 {
            if x.unit == 0 || x.val >= abs {
                0
            } else {
                let scale = pow_mod(p as u64, (x.val - low) as u64, m);
                mul_mod(x.unit % m, scale, m)
            }
        };
        let sum = ((lift(&self) as u128 + lift(&rhs) as u128) % m as u128) as u64;
        if sum == 0 {
            return Self::approx_zero(p, abs);
        }
        let (k, unit) = split_p(sum, p);
        Self { prime: p, val: low + k as i64, unit, prec: digits - k }
    }
}

impl Neg for PadicNumber {
    type Output = Self;

    fn neg(self) -> Self {
        if self.unit == 0 {
            return self;
        }
        let m = modulus(self.prime, self.prec).expect("existing precision fits");
        Self { unit: m - self.unit, ..self }
    }
}

impl Sub for PadicNumber {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for PadicNumber {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_exact_zero() {
            return self;
        }
        if rhs.is_exact_zero() {
            return rhs;
        }
        self.check_prime(&rhs);
        let p = self.prime;
        match (self.unit == 0, rhs.unit == 0) {
            (true, _) | (_, true) => Self::approx_zero(p, self.order() + rhs.order()),
            (false, false) => {
                let prec = self.prec.min(rhs.prec);
                let m = modulus(p, prec).expect("existing precision fits");
                Self { prime: p, val: self.val + rhs.val, unit: mul_mod(self.unit % m, rhs.unit % m, m), prec }
            }
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            write!(f, "0")
        } else if self.unit == 0 {
            write!(f, "O({}^{})", self.prime, self.val)
        } else {
            write!(f, "{}·{}^{} + O({}^{})", self.unit, self.prime, self.val, self.prime, self.val + self.prec as i64)
        }
    }
}
