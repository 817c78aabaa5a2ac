//! Laurent series with `log z` terms on an annulus `|p| < |z| < 1`.
//!
//! A [`LogLaurentFunction`] is a finite sum `Σ c_{k,n} z^k log(z)^n` with
//! coefficients in ℚ_p[Λ]. One-forms are stored by their density against
//! `dz/z`: [`LogForm`] for general log-forms and [`AnnulusForm`] for plain
//! Laurent forms `Σ a_k z^k dz/z`.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::padic::{PadicError, UniversalScalar};
use crate::scalar::Coefficient;
use crate::Rational;

pub const DEFAULT_WINDOW: i64 = 12;
pub const DEFAULT_LOG_CAP: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaurentError {
    OutOfWindow {
        k: i64,
        window: i64,
    },
    LogDegreeOverflow {
        degree: u32,
        cap: u32,
    },
    /// An input lost terms to window truncation, so low-order coefficients
    /// of a product can no longer be trusted.
    Truncated,
    Scalar(PadicError),
}

impl fmt::Display for LaurentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaurentError::OutOfWindow { k, window } => {
                write!(f, "Laurent degree {k} outside window [-{window}, {window}]")
            }
            LaurentError::LogDegreeOverflow { degree, cap } => write!(f, "log-degree {degree} exceeds cap {cap}"),
            LaurentError::Truncated => f.write_str("input was truncated; product coefficients are unreliable"),
            LaurentError::Scalar(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LaurentError {}

impl From<PadicError> for LaurentError {
    fn from(e: PadicError) -> Self {
        LaurentError::Scalar(e)
    }
}

impl LaurentError {
    pub fn kind(&self) -> crate::ErrorKind {
        match self {
            LaurentError::Scalar(e) => e.kind(),
            _ => crate::ErrorKind::Overflow,
        }
    }
}

/// Window `[−window, window]` for the Laurent degree and a bound on the log-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesConfig {
    pub window: i64,
    pub log_cap: u32,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { window: DEFAULT_WINDOW, log_cap: DEFAULT_LOG_CAP }
    }
}

impl SeriesConfig {
    fn check(&self, k: i64, n: u32) -> Result<(), LaurentError> {
        if k.abs() > self.window {
            return Err(LaurentError::OutOfWindow { k, window: self.window });
        }
        if n > self.log_cap {
            return Err(LaurentError::LogDegreeOverflow { degree: n, cap: self.log_cap });
        }
        Ok(())
    }

    fn join(self, other: Self) -> Self {
        Self { window: self.window.max(other.window), log_cap: self.log_cap.max(other.log_cap) }
    }
}

/// `Σ c_{k,n} z^k log(z)^n`, keyed by `(k, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLaurentFunction {
    terms: BTreeMap<(i64, u32), UniversalScalar>,
    config: SeriesConfig,
    truncated: bool,
}

impl LogLaurentFunction {
    pub fn zero(config: SeriesConfig) -> Self {
        Self { terms: BTreeMap::new(), config, truncated: false }
    }

    pub fn from_terms(
        config: SeriesConfig,
        terms: impl IntoIterator<Item = ((i64, u32), UniversalScalar)>,
    ) -> Result<Self, LaurentError> {
        let mut f = Self::zero(config);
        for ((k, n), c) in terms {
            f.add_term(k, n, c)?;
        }
        Ok(f)
    }

    pub fn monomial(config: SeriesConfig, k: i64, n: u32, c: UniversalScalar) -> Result<Self, LaurentError> {
        Self::from_terms(config, [((k, n), c)])
    }

    pub fn constant(config: SeriesConfig, c: UniversalScalar) -> Self {
        Self::monomial(config, 0, 0, c).expect("constant term is always in range")
    }

    /// Adds `c z^k log(z)^n`.
    pub fn add_term(&mut self, k: i64, n: u32, c: UniversalScalar) -> Result<(), LaurentError> {
        self.config.check(k, n)?;
        let entry = self.terms.entry((k, n)).or_default();
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&(k, n));
        }
        Ok(())
    }

    pub fn config(&self) -> SeriesConfig {
        self.config
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32, &UniversalScalar)> {
        self.terms.iter().map(|(&(k, n), c)| (k, n, c))
    }

    pub fn coeff(&self, k: i64, n: u32) -> UniversalScalar {
        self.terms.get(&(k, n)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(UniversalScalar::is_zero)
    }

    pub fn log_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, n)| n).max()
    }

    /// Applies a coefficientwise map, dropping terms that become zero.
    pub fn map_coeffs(&self, mut f: impl FnMut(&UniversalScalar) -> UniversalScalar) -> Self {
        let terms = self.terms.iter().map(|(&key, c)| (key, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Self { terms, ..self.clone() }
    }

    /// Product; terms with Laurent degree outside the window are dropped and
    /// the result is flagged as truncated.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        let config = self.config.join(other.config);
        let mut out = Self::zero(config);
        out.truncated = self.truncated || other.truncated;
        for (&(k1, n1), a) in &self.terms {
            for (&(k2, n2), b) in &other.terms {
                let (k, n) = (k1 + k2, n1 + n2);
                if n > config.log_cap {
                    return Err(LaurentError::LogDegreeOverflow { degree: n, cap: config.log_cap });
                }
                if k.abs() > config.window {
                    out.truncated = true;
                    continue;
                }
                out.add_term(k, n, a.checked_mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// The differential, as a density against `dz/z`:
    /// `d(z^k log^n z) = (k z^k log^n z + n z^k log^{n−1} z) dz/z`.
    pub fn differential(&self) -> LogForm {
        let mut density = Self::zero(self.config);
        density.truncated = self.truncated;
        for (&(k, n), c) in &self.terms {
            if k != 0 {
                density.add_term(k, n, c.scale(&Rational::from_integer(k.into()))).expect("same support");
            }
            if n > 0 {
                density.add_term(k, n - 1, c.scale(&Rational::from_integer(n.into()))).expect("same support");
            }
        }
        LogForm { density }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).terms.values().all(UniversalScalar::is_zero)
    }
}

impl core::ops::Add for LogLaurentFunction {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = Self { config: self.config.join(rhs.config), truncated: self.truncated || rhs.truncated, ..self };
        for ((k, n), c) in rhs.terms {
            out.add_term(k, n, c).expect("joined config covers both supports");
        }
        out
    }
}

impl core::ops::Neg for LogLaurentFunction {
    type Output = Self;

    fn neg(self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }
}

impl core::ops::Sub for LogLaurentFunction {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

/// A one-form `F dz/z` with `F` a log-Laurent series.
#[derive(Debug, Clone, PartialEq)]
pub struct LogForm {
    pub density: LogLaurentFunction,
}

impl LogForm {
    pub fn new(density: LogLaurentFunction) -> Self {
        Self { density }
    }

    /// `F · η`.
    pub fn times(&self, f: &LogLaurentFunction) -> Result<Self, LaurentError> {
        Ok(Self { density: f.checked_mul(&self.density)? })
    }
}

/// `Σ a_k z^k dz/z`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnulusForm {
    coeffs: BTreeMap<i64, UniversalScalar>,
}

impl AnnulusForm {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, UniversalScalar)>) -> Self {
        let mut form = Self::default();
        for (k, c) in coeffs {
            let entry = form.coeffs.entry(k).or_default();
            *entry = entry.clone() + c;
        }
        form.coeffs.retain(|_, c| !c.is_zero());
        form
    }

    /// `dz/z` scaled by `a0`.
    pub fn dlog(a0: UniversalScalar) -> Self {
        Self::new([(0, a0)])
    }

    pub fn coeff(&self, k: i64) -> UniversalScalar {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &UniversalScalar)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `res ω = a_0`.
    pub fn residue(&self) -> UniversalScalar {
        self.coeff(0)
    }

    pub fn to_log_form(&self, config: SeriesConfig) -> Result<LogForm, LaurentError> {
        let density = LogLaurentFunction::from_terms(config, self.coeffs.iter().map(|(&k, c)| ((k, 0), c.clone())))?;
        Ok(LogForm { density })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|(&k, c)| (k, c.scale(r))))
    }
}

/// The primitive `Σ_{k≠0} (a_k/k) z^k + a_0 log z + C`.
pub fn integrate(
    omega: &AnnulusForm,
    constant: UniversalScalar,
    config: SeriesConfig,
) -> Result<LogLaurentFunction, LaurentError> {
    let mut f = LogLaurentFunction::constant(config, constant);
    for (k, a) in omega.coeffs() {
        if k == 0 {
            f.add_term(0, 1, a.clone())?;
        } else {
            f.add_term(k, 0, a.scale(&Rational::new(1.into(), k.into())))?;
        }
    }
    Ok(f)
}

/// The residue functional on log-forms: the `dz/z` coefficient.
///
/// `z^k log^n z dz/z` is exact whenever `k ≠ 0` (integrate by parts down to
/// `n = 0`) and whenever `k = 0, n ≥ 1`, so only the `(0, 0)` term survives.
pub fn extended_residue(eta: &LogForm) -> UniversalScalar {
    eta.density.coeff(0, 0)
}

/// `⟨F, G⟩ = res(F dG)`.
pub fn local_index(f: &LogLaurentFunction, g: &LogLaurentFunction) -> Result<UniversalScalar, LaurentError> {
    if f.is_truncated() || g.is_truncated() {
        return Err(LaurentError::Truncated);
    }
    // Only pairs with opposite Laurent degree reach the residue, so finite
    // inputs never lose the k = 0 coefficient to the window.
    let form = g.differential().times(f)?;
    Ok(extended_residue(&form))
}

/// Rewrites `ω` in the coordinate `w = p/z` of the other end of the annulus:
/// `Σ a_k z^k dz/z = −Σ a_k p^k w^{−k} dw/w`.
pub fn flip_coordinate(omega: &AnnulusForm) -> AnnulusForm {
    AnnulusForm::new(omega.coeffs().map(|(k, a)| (-k, -a.shift(k))))
}

/// `F_1 − F_2 = C_1 − C_2 + a_0 Λ`, the difference of the primitives of `ω`
/// continued from the inner side (constant `C_1`) and the outer side (`C_2`).
pub fn cross_annulus_jump(
    omega: &AnnulusForm,
    c1: &UniversalScalar,
    c2: &UniversalScalar,
) -> Result<UniversalScalar, PadicError> {
    Ok(c1.clone() - c2.clone() + omega.residue().mul_lambda()?)
}
