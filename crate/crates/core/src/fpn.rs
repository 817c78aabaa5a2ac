//! Filtered Frobenius-monodromy modules over ℚ_p and their extension classes.
//!
//! A module is given in a basis adapted to its weight grading `D = ⊕ D^k`;
//! `φ`, `N` and the comparison `I` are rational matrices. Classes in
//! `H¹(C_st)` are triples `(x, y, z) ∈ D ⊕ D ⊕ D_K/F⁰` with entries in any
//! [`Coefficient`] type, so the continuous part may carry ℚ_p[Λ] values.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::linalg::{self, rref, Matrix};
use crate::padic::{iwasawa_log, PadicError, PadicNumber, UniversalScalar};
use crate::scalar::{combine, rational, Coefficient};
use crate::Rational;

/// The first identity a module fails, with the offending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    Singular {
        what: &'static str,
    },
    NotNilpotent,
    /// `(Nφ − pφN)[row][col] ≠ 0`.
    FrobeniusMonodromy {
        row: usize,
        col: usize,
    },
    /// `N[row][col] ≠ 0` although `weight(row) ≠ weight(col) − 2`.
    MonodromyWeight {
        row: usize,
        col: usize,
    },
    /// `φ[row][col] ≠ 0` across different weights.
    FrobeniusWeight {
        row: usize,
        col: usize,
    },
    /// `φ − 1` is singular on `D^k`, `k ≠ 0`.
    FrobeniusFixed {
        weight: i32,
    },
    /// `pφ − 1` is singular on `D^k`, `k ≠ −2`.
    TwistedFrobeniusFixed {
        weight: i32,
    },
    FiltrationNotDescending {
        index: i32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension { what, expected, found } => {
                write!(f, "{what} has dimension {found}, expected {expected}")
            }
            Violation::Singular { what } => write!(f, "{what} is not invertible"),
            Violation::NotNilpotent => f.write_str("N is not nilpotent"),
            Violation::FrobeniusMonodromy { row, col } => write!(f, "Nφ ≠ pφN at entry ({row}, {col})"),
            Violation::MonodromyWeight { row, col } => {
                write!(f, "N[{row}][{col}] ≠ 0 but N must lower the weight by 2")
            }
            Violation::FrobeniusWeight { row, col } => write!(f, "φ[{row}][{col}] ≠ 0 mixes weights"),
            Violation::FrobeniusFixed { weight } => write!(f, "φ − 1 is singular on the weight-{weight} part"),
            Violation::TwistedFrobeniusFixed { weight } => write!(f, "pφ − 1 is singular on the weight-{weight} part"),
            Violation::FiltrationNotDescending { index } => {
                write!(f, "F^{index} does not contain the next filtration step")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FpnError {
    Invalid(Violation),
    /// Neither `D⁰ = 0` nor `N: D⁰ → D^{−2}` an isomorphism.
    Unsupported,
    NotCocycle,
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    BadExtension(&'static str),
    Scalar(PadicError),
}

impl fmt::Display for FpnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpnError::Invalid(v) => write!(f, "invalid module: {v}"),
            FpnError::Unsupported => f.write_str("module has D⁰ ≠ 0 and N: D⁰ → D^{-2} is not an isomorphism"),
            FpnError::NotCocycle => f.write_str("triple violates Nx + (1 − pφ)y = 0"),
            FpnError::LengthMismatch { expected, found } => {
                write!(f, "expected vectors of length {expected}, found {found}")
            }
            FpnError::BadExtension(why) => write!(f, "bad extension: {why}"),
            FpnError::Scalar(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FpnError {}

impl From<Violation> for FpnError {
    fn from(v: Violation) -> Self {
        FpnError::Invalid(v)
    }
}

impl From<PadicError> for FpnError {
    fn from(e: PadicError) -> Self {
        FpnError::Scalar(e)
    }
}

/// A descending filtration on `D_K`: `steps[i]` spans `F^i` (as rows); an
/// unlisted `F^i` equals the next listed step above it, or 0 past the last.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Filtration {
    pub steps: BTreeMap<i32, Matrix>,
}

impl Filtration {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Only `F⁰` given.
    pub fn f0(basis: Matrix) -> Self {
        Self { steps: BTreeMap::from([(0, basis)]) }
    }

    /// Spanning rows of `F^i` in dimension `n`.
    pub fn step(&self, i: i32, n: usize) -> Matrix {
        self.steps.range(i..).next().map_or_else(|| Matrix::zeros(0, n), |(_, m)| m.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpnModule {
    pub prime: u32,
    pub phi: Matrix,
    pub monodromy: Matrix,
    pub weights: Vec<i32>,
    pub filtration: Filtration,
    /// `I_π` at the reference uniformizer.
    pub comparison: Matrix,
}

fn stack(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = (0..a.rows()).map(|i| a.row(i).to_vec()).chain((0..b.rows()).map(|i| b.row(i).to_vec()));
    let rows: Vec<_> = rows.collect();
    if rows.is_empty() {
        return Matrix::zeros(0, a.cols());
    }
    Matrix::from_rows(rows).expect("equal widths")
}

fn sub_vec<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn add_vec<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn all_negligible<C: Coefficient>(v: &[C]) -> bool {
    v.iter().all(C::is_negligible)
}

/// Whether two vectors agree to working precision.
pub fn vectors_agree<C: Coefficient>(a: &[C], b: &[C]) -> bool {
    a.len() == b.len() && all_negligible(&sub_vec(a, b))
}

impl FpnModule {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    fn p(&self) -> Rational {
        Rational::from_integer(self.prime.into())
    }

    pub fn weight_indices(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == k).collect()
    }

    fn distinct_weights(&self) -> Vec<i32> {
        let mut w = self.weights.clone();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// `pφ`.
    pub fn twisted_phi(&self) -> Matrix {
        self.phi.scale(&self.p())
    }

    /// Spanning rows of `F⁰ D_K`.
    pub fn f0(&self) -> Matrix {
        self.filtration.step(0, self.dim())
    }

    /// The same module with `I` replaced by `I ∘ exp(ℓN)`.
    pub fn with_uniformizer_shift(&self, ell: &Rational) -> Self {
        Self { comparison: self.comparison.mul(&exp_nilpotent(&self.monodromy, ell)), ..self.clone() }
    }

    /// The smallest `m` with `N^m = 0`, if `N` is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.dim();
        let mut power = Matrix::identity(n);
        for m in 0..=n {
            if power.is_zero() {
                return Some(m);
            }
            power = power.mul(&self.monodromy);
        }
        None
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.dim();
        for (what, m) in [("φ", &self.phi), ("N", &self.monodromy), ("I", &self.comparison)] {
            for found in [m.rows(), m.cols()] {
                if found != n {
                    return Err(Violation::Dimension { what, expected: n, found });
                }
            }
        }
        for basis in self.filtration.steps.values() {
            if basis.cols() != n {
                return Err(Violation::Dimension { what: "filtration step", expected: n, found: basis.cols() });
            }
        }
        if linalg::rank(&self.phi) < n {
            return Err(Violation::Singular { what: "φ" });
        }
        if linalg::rank(&self.comparison) < n {
            return Err(Violation::Singular { what: "I" });
        }
        if self.nilpotency_index().is_none() {
            return Err(Violation::NotNilpotent);
        }
        let defect = self.monodromy.mul(&self.phi).sub(&self.twisted_phi().mul(&self.monodromy));
        for i in 0..n {
            for j in 0..n {
                if !defect.get(i, j).is_zero() {
                    return Err(Violation::FrobeniusMonodromy { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.monodromy.get(i, j).is_zero() && self.weights[i] != self.weights[j] - 2 {
                    return Err(Violation::MonodromyWeight { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.phi.get(i, j).is_zero() && self.weights[i] != self.weights[j] {
                    return Err(Violation::FrobeniusWeight { row: i, col: j });
                }
            }
        }
        let one = Matrix::identity(n);
        for k in self.distinct_weights() {
            let idx = self.weight_indices(k);
            if k != 0 && linalg::rank(&self.phi.sub(&one).select(&idx, &idx)) < idx.len() {
                return Err(Violation::FrobeniusFixed { weight: k });
            }
            if k != -2 && linalg::rank(&self.twisted_phi().sub(&one).select(&idx, &idx)) < idx.len() {
                return Err(Violation::TwistedFrobeniusFixed { weight: k });
            }
        }
        let mut previous: Option<&Matrix> = None;
        for (&index, basis) in self.filtration.steps.iter().rev() {
            if let Some(smaller) = previous {
                if linalg::rank(&stack(basis, smaller)) != linalg::rank(basis) {
                    return Err(Violation::FiltrationNotDescending { index });
                }
            }
            previous = Some(basis);
        }
        Ok(())
    }

    /// Canonical representative of `z` in `D_K/F⁰`.
    pub fn reduce_mod_f0<C: Coefficient>(&self, z: &[C]) -> Vec<C> {
        let (r, pivots) = rref(&self.f0());
        let mut v = z.to_vec();
        for (row, &c) in pivots.iter().enumerate() {
            let coef = v[c].clone();
            if coef.is_negligible() {
                continue;
            }
            for (j, entry) in r.row(row).iter().enumerate() {
                if !entry.is_zero() {
                    v[j] = v[j].clone() - coef.scale(entry);
                }
            }
        }
        v
    }

    /// Keeps the weight-`k` coordinates, zeroing the rest.
    pub fn project<C: Coefficient>(&self, v: &[C], k: i32) -> Vec<C> {
        v.iter().zip(&self.weights).map(|(c, &w)| if w == k { c.clone() } else { C::zero_value() }).collect()
    }

    fn check_len<C>(&self, v: &[C]) -> Result<(), FpnError> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(FpnError::LengthMismatch { expected: self.dim(), found: v.len() })
        }
    }

    /// `(φ − 1, N, −I)(w)`.
    pub fn first_differential<C: Coefficient>(&self, w: &[C]) -> StTriple<C> {
        let n = self.dim();
        let x = self.phi.sub(&Matrix::identity(n)).apply(w);
        let y = self.monodromy.apply(w);
        let z = self.comparison.apply(w).into_iter().map(|c| -c).collect();
        StTriple { x, y, z }
    }

    /// `Nx + (1 − pφ)y`.
    pub fn second_differential<C: Coefficient>(&self, t: &StTriple<C>) -> Vec<C> {
        let one_minus = Matrix::identity(self.dim()).sub(&self.twisted_phi());
        add_vec(&self.monodromy.apply(&t.x), &one_minus.apply(&t.y))
    }

    pub fn is_cocycle<C: Coefficient>(&self, t: &StTriple<C>) -> bool {
        all_negligible(&self.second_differential(t))
    }

    pub fn case(&self) -> Result<NormalCase, FpnError> {
        let d0 = self.weight_indices(0);
        if d0.is_empty() {
            return Ok(NormalCase::NoWeightZero);
        }
        let d2 = self.weight_indices(-2);
        if d2.len() == d0.len() && linalg::rank(&self.monodromy.select(&d2, &d0)) == d0.len() {
            return Ok(NormalCase::MonodromyIsomorphism);
        }
        Err(FpnError::Unsupported)
    }

    /// `w = Σ_{k≠0} (φ − 1)^{−1} x_k`.
    fn frobenius_gauge<C: Coefficient>(&self, x: &[C]) -> Vec<C> {
        let n = self.dim();
        let mut w = alloc::vec![C::zero_value(); n];
        let one = Matrix::identity(n);
        for k in self.distinct_weights() {
            if k == 0 {
                continue;
            }
            let idx = self.weight_indices(k);
            let block = linalg::inverse(&self.phi.sub(&one).select(&idx, &idx)).expect("validated");
            let xk: Vec<C> = idx.iter().map(|&i| x[i].clone()).collect();
            for (row, &i) in idx.iter().enumerate() {
                w[i] = combine(block.row(row), &xk);
            }
        }
        w
    }

    fn check_supported_in<C: Coefficient>(&self, v: &[C], k: i32) -> Result<(), FpnError> {
        for (c, &w) in v.iter().zip(&self.weights) {
            if w != k && !c.is_negligible() {
                // Only reachable if the grading conditions fail on this data.
                return Err(FpnError::Invalid(Violation::TwistedFrobeniusFixed { weight: w }));
            }
        }
        Ok(())
    }
}

/// `exp(ℓN) = Σ_k ℓ^k N^k / k!` for nilpotent `N`.
pub fn exp_nilpotent(n: &Matrix, ell: &Rational) -> Matrix {
    let mut total = Matrix::identity(n.rows());
    let mut term = Matrix::identity(n.rows());
    for k in 1..=n.rows() {
        term = term.mul(n).scale(&(ell / Rational::from_integer(k.into())));
        if term.is_zero() {
            break;
        }
        total = total.add(&term);
    }
    total
}

/// A representative `(x, y, z)` of a class in `H¹(C_st)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StTriple<C> {
    pub x: Vec<C>,
    pub y: Vec<C>,
    pub z: Vec<C>,
}

impl<C: Coefficient> StTriple<C> {
    pub fn zeros(n: usize) -> Self {
        let z = alloc::vec![C::zero_value(); n];
        Self { x: z.clone(), y: z.clone(), z }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { x: add_vec(&self.x, &other.x), y: add_vec(&self.y, &other.y), z: add_vec(&self.z, &other.z) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { x: sub_vec(&self.x, &other.x), y: sub_vec(&self.y, &other.y), z: sub_vec(&self.z, &other.z) }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let s = |v: &[C]| v.iter().map(|c| c.scale(r)).collect();
        Self { x: s(&self.x), y: s(&self.y), z: s(&self.z) }
    }
}

/// The class of `0 → D → D′ → 1 → 0` from lifts `A ∈ D′` and `B ∈ F⁰D′_K`
/// of 1: `(x, y, z) = ((φ − 1)A, NA, B − I(A))`.
///
/// `ext` is `D′` in a basis whose first `dim − 1` vectors span `D` and whose
/// last vector maps to 1. The filtration of `D′` is the one generated by
/// `F⁰D_K` and `B`, so only the lifting conditions are checked.
pub fn ext_to_triple<C: Coefficient>(ext: &FpnModule, a: &[C], b: &[C]) -> Result<StTriple<C>, FpnError> {
    let total = ext.dim();
    ext.check_len(a)?;
    ext.check_len(b)?;
    if total == 0 {
        return Err(FpnError::BadExtension("extension has dimension 0"));
    }
    let n = total - 1;
    let last = |m: &Matrix, j: usize| m.get(n, j).clone();
    for j in 0..n {
        if !last(&ext.phi, j).is_zero() || !last(&ext.comparison, j).is_zero() {
            return Err(FpnError::BadExtension("D is not stable in D′"));
        }
    }
    if !One::is_one(&last(&ext.phi, n)) || !One::is_one(&last(&ext.comparison, n)) {
        return Err(FpnError::BadExtension("quotient is not the unit object"));
    }
    if (0..total).any(|j| !last(&ext.monodromy, j).is_zero()) {
        return Err(FpnError::BadExtension("quotient is not the unit object"));
    }
    let defect = ext.monodromy.mul(&ext.phi).sub(&ext.twisted_phi().mul(&ext.monodromy));
    if !defect.is_zero() {
        return Err(FpnError::BadExtension("Nφ ≠ pφN on D′"));
    }
    if !a[n].is_unit_value() {
        return Err(FpnError::BadExtension("A does not lift 1"));
    }
    if !b[n].is_unit_value() {
        return Err(FpnError::BadExtension("B does not lift 1"));
    }
    let full = ext.first_differential(a);
    let z = add_vec(b, &full.z);
    Ok(StTriple { x: full.x[..n].to_vec(), y: full.y[..n].to_vec(), z: z[..n].to_vec() })
}

/// The submodule `D` of an extension given as in [`ext_to_triple`].
pub fn extension_submodule(ext: &FpnModule) -> FpnModule {
    let idx: Vec<usize> = (0..ext.dim().saturating_sub(1)).collect();
    let steps =
        ext.filtration.steps.iter().map(|(&i, m)| (i, m.select(&(0..m.rows()).collect::<Vec<_>>(), &idx))).collect();
    FpnModule {
        prime: ext.prime,
        phi: ext.phi.select(&idx, &idx),
        monodromy: ext.monodromy.select(&idx, &idx),
        weights: ext.weights[..idx.len()].to_vec(),
        filtration: Filtration { steps },
        comparison: ext.comparison.select(&idx, &idx),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalCase {
    /// `D⁰ = 0`.
    NoWeightZero,
    /// `N: D⁰ → D^{−2}` is an isomorphism.
    MonodromyIsomorphism,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm<C> {
    pub case: NormalCase,
    /// Cohomologous to the input, with `x = 0` (and `y = 0` in the second case).
    pub triple: StTriple<C>,
    /// The continuous component, reduced modulo `F⁰`.
    pub beta: Vec<C>,
    /// The discrete component, supported in `D^{−2}`.
    pub rho: Vec<C>,
}

/// Brings a cocycle to the canonical normal form and reads off `(ß, ρ)`.
pub fn normalize_class<C: Coefficient>(m: &FpnModule, t: &StTriple<C>) -> Result<NormalForm<C>, FpnError> {
    m.validate()?;
    for v in [&t.x, &t.y, &t.z] {
        m.check_len(v)?;
    }
    if !m.is_cocycle(t) {
        return Err(FpnError::NotCocycle);
    }
    let case = m.case()?;
    let w = m.frobenius_gauge(&t.x);
    let mut t1 = t.sub(&m.first_differential(&w));
    m.check_supported_in(&t1.x, 0)?;
    m.check_supported_in(&t1.y, -2)?;
    if case == NormalCase::MonodromyIsomorphism {
        let d0 = m.weight_indices(0);
        let d2 = m.weight_indices(-2);
        let inv = linalg::inverse(&m.monodromy.select(&d2, &d0)).expect("checked by case()");
        let y2: Vec<C> = d2.iter().map(|&i| t1.y[i].clone()).collect();
        let mut w2 = alloc::vec![C::zero_value(); m.dim()];
        for (row, &i) in d0.iter().enumerate() {
            w2[i] = combine(inv.row(row), &y2);
        }
        t1 = t1.sub(&m.first_differential(&w2));
        m.check_supported_in(&t1.y, i32::MIN)?;
    }
    m.check_supported_in(&t1.x, i32::MIN)?;
    let beta = m.reduce_mod_f0(&t1.z);
    let rho = m.project(&t1.y, -2);
    t1.z = beta.clone();
    Ok(NormalForm { case, triple: t1, beta, rho })
}

/// The effect on `z = B − I(A)` of replacing `I` by `I ∘ exp(ℓN)`, using `NA = y`:
/// `z − Σ_{k≥1} ℓ^k/k! · I N^{k−1} y`.
pub fn change_uniformizer_class<C: Coefficient>(t: &StTriple<C>, ell: &Rational, m: &FpnModule) -> StTriple<C> {
    let poly = uniformizer_polynomial(t, m);
    let mut z = poly[0].clone();
    let mut power = Rational::one();
    for coeff in &poly[1..] {
        power *= ell;
        z = add_vec(&z, &coeff.iter().map(|c| c.scale(&power)).collect::<Vec<_>>());
    }
    StTriple { x: t.x.clone(), y: t.y.clone(), z }
}

/// Coefficients of `z` under the change of uniformizer as a polynomial in a
/// formal `ℓ`: entry `k` is the coefficient vector of `ℓ^k`.
pub fn uniformizer_polynomial<C: Coefficient>(t: &StTriple<C>, m: &FpnModule) -> Vec<Vec<C>> {
    let mut out = alloc::vec![t.z.clone()];
    let mut v = t.y.clone();
    let mut factorial = Rational::one();
    for k in 1..=m.dim().max(1) {
        if all_negligible(&v) {
            break;
        }
        factorial *= Rational::from_integer(k.into());
        let coeff = m.comparison.apply(&v).into_iter().map(|c| -c.scale(&factorial.recip())).collect();
        out.push(coeff);
        v = m.monodromy.apply(&v);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynderiReport<C> {
    pub holds: bool,
    /// Degree-1 coefficient in `ℓ` of `ß` after the change of uniformizer.
    pub derivative: Vec<C>,
    /// `−I(ρ)` modulo `F⁰`.
    pub expected: Vec<C>,
    /// `ß` as a polynomial in `ℓ`, from normalizing at sample points.
    pub beta_polynomial: Vec<Vec<C>>,
    pub rho: Vec<C>,
    /// Whether `ß` has no positive-degree terms in `ℓ`.
    pub ell_independent: bool,
}

/// Checks `dß/dℓ = −I ∘ ρ`.
///
/// `ß(ℓ)` is computed by normalizing the changed class with respect to the
/// changed comparison `I ∘ exp(ℓN)` at `ℓ = 0, 1, …, m` (`N^m = 0`) and
/// interpolating; the result is also compared against the closed-form
/// polynomial from [`uniformizer_polynomial`].
pub fn synderi_check<C: Coefficient>(m: &FpnModule, t: &StTriple<C>) -> Result<SynderiReport<C>, FpnError> {
    let base = normalize_class(m, t)?;
    let degree = m.nilpotency_index().ok_or(FpnError::Invalid(Violation::NotNilpotent))?.max(1);
    let nodes: Vec<Rational> = (0..=degree).map(|j| rational(j as i64, 1)).collect();
    let mut samples = Vec::with_capacity(nodes.len());
    for ell in &nodes {
        let shifted = m.with_uniformizer_shift(ell);
        samples.push(normalize_class(&shifted, &change_uniformizer_class(t, ell, m))?.beta);
    }
    let vandermonde = Matrix::from_rows(
        nodes.iter().map(|x| (0..nodes.len()).map(|k| num_traits::pow(x.clone(), k)).collect()).collect(),
    )
    .expect("square");
    let inv = linalg::inverse(&vandermonde).expect("distinct nodes");
    let n = m.dim();
    let beta_polynomial: Vec<Vec<C>> = (0..nodes.len())
        .map(|k| {
            (0..n).map(|i| combine(inv.row(k), &samples.iter().map(|s| s[i].clone()).collect::<Vec<_>>())).collect()
        })
        .collect();

    let closed: Vec<Vec<C>> = uniformizer_polynomial(&base.triple, m).iter().map(|c| m.reduce_mod_f0(c)).collect();
    let zero = alloc::vec![C::zero_value(); n];
    let consistent = (0..beta_polynomial.len().max(closed.len())).all(|k| {
        let a = beta_polynomial.get(k).unwrap_or(&zero);
        let b = closed.get(k).unwrap_or(&zero);
        vectors_agree(a, b)
    });

    let derivative = beta_polynomial.get(1).cloned().unwrap_or_else(|| zero.clone());
    let minus_i_rho: Vec<C> = m.comparison.apply(&base.rho).into_iter().map(|c| -c).collect();
    let expected = m.reduce_mod_f0(&minus_i_rho);
    let ell_independent = beta_polynomial.iter().skip(1).all(|c| all_negligible(c));
    Ok(SynderiReport {
        holds: consistent && vectors_agree(&derivative, &expected),
        derivative,
        expected,
        beta_polynomial,
        rho: base.rho,
        ell_independent,
    })
}

/// `D = ⟨f⟩` of weight −2 with `φf = f/p`, `N = 0`, `I = 1`, `F⁰ = 0`.
pub fn kummer_module(prime: u32) -> FpnModule {
    FpnModule {
        prime,
        phi: Matrix::from_rows(alloc::vec![alloc::vec![rational(1, prime as i64)]]).expect("1×1"),
        monodromy: Matrix::zeros(1, 1),
        weights: alloc::vec![-2],
        filtration: Filtration::zero(),
        comparison: Matrix::identity(1),
    }
}

/// The extension `D′ = ⟨f, e⟩` with `φe = e` and `Ne = ν·f`.
pub fn kummer_extension(prime: u32, nu: i64) -> FpnModule {
    let mut monodromy = Matrix::zeros(2, 2);
    monodromy.set(0, 1, rational(nu, 1));
    FpnModule {
        prime,
        phi: Matrix::diagonal(&[rational(1, prime as i64), rational(1, 1)]),
        monodromy,
        weights: alloc::vec![-2, 0],
        filtration: Filtration::zero(),
        comparison: Matrix::identity(2),
    }
}

/// The class of `x ∈ ℚ_p^×` in the Kummer model: lifts `A = e`,
/// `B = log(x)·f + e`, giving the triple `(0, ν(x) f, log(x) f)`.
pub fn kummer_class(x: &PadicNumber) -> Result<StTriple<UniversalScalar>, FpnError> {
    let p = x.prime();
    let nu = x.valuation().ok_or(PadicError::LogOfZero)?;
    let log = iwasawa_log(x)?;
    let one = UniversalScalar::constant(PadicNumber::one(p, x.precision())?);
    let a = alloc::vec![UniversalScalar::zero_for(p), one.clone()];
    let b = alloc::vec![log, one];
    ext_to_triple(&kummer_extension(p, nu), &a, &b)
}
