//! Coefficient types shared by the graph, annulus and module computations.

use core::fmt::Debug;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::padic::{PadicError, PadicNumber, UniversalScalar};
use crate::Rational;

/// A ℚ-vector space element: everything the linear solvers need.
///
/// Operators with rational matrices (Laplacians, Frobenius, monodromy) act on
/// vectors of any `Coefficient`, so one exact solver serves ℚ and ℚ_p[Λ].
pub trait Coefficient:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    fn zero_value() -> Self;
    /// Zero, or zero to working precision for inexact types.
    fn is_negligible(&self) -> bool;
    fn scale(&self, r: &Rational) -> Self;
    /// Equal to 1, to working precision for inexact types.
    fn is_unit_value(&self) -> bool;
}

/// A commutative ring of coefficients whose products may overflow a bound.
pub trait Scalar: Coefficient {
    fn try_mul(&self, other: &Self) -> Result<Self, PadicError>;
}

impl Coefficient for Rational {
    fn zero_value() -> Self {
        <Rational as Zero>::zero()
    }

    fn is_negligible(&self) -> bool {
        Zero::is_zero(self)
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn is_unit_value(&self) -> bool {
        One::is_one(self)
    }
}

impl Scalar for Rational {
    fn try_mul(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self * other)
    }
}

impl Coefficient for UniversalScalar {
    fn zero_value() -> Self {
        UniversalScalar::zero()
    }

    fn is_negligible(&self) -> bool {
        UniversalScalar::is_zero(self)
    }

    fn scale(&self, r: &Rational) -> Self {
        self.scale_rational(r)
    }

    fn is_unit_value(&self) -> bool {
        let c = self.constant_term();
        self.degree() == Some(0)
            && PadicNumber::one(c.prime(), c.precision().max(1)).is_ok_and(|one| c.agrees_with(&one))
    }
}

impl Scalar for UniversalScalar {
    fn try_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.checked_mul(other)
    }
}

/// `Σ coeffs[i]·values[i]`.
pub fn combine<C: Coefficient>(coeffs: &[Rational], values: &[C]) -> C {
    coeffs.iter().zip(values).filter(|(a, _)| !Zero::is_zero(*a)).fold(C::zero_value(), |acc, (a, v)| {
        if a.is_one() {
            acc + v.clone()
        } else {
            acc + v.scale(a)
        }
    })
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
