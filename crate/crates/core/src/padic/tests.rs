use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::scalar::rational;
use crate::Rational;

/// Partial sum of log(1 + y) over ℚ, with y an integer divisible by p,
/// reduced into ℚ_p. Independent of the Teichmüller route: log u is computed
/// as log(u^(p−1)) / (p−1) (for p = 2 as log(u²)/2).
fn log_oracle(p: u32, u: i64, prec: u32) -> PadicNumber {
    let e = if p == 2 { 2 } else { p - 1 };
    let big_u = BigInt::from(u);
    let y = num_traits::pow(big_u, e as usize) - BigInt::from(1);
    let mut sum = Rational::from_integer(BigInt::from(0));
    let mut power = Rational::from_integer(BigInt::from(1));
    for k in 1..=(4 * prec as i64 + 16) {
        power *= Rational::from_integer(y.clone());
        let term = &power / Rational::from_integer(BigInt::from(k));
        sum = if k % 2 == 1 { sum + term } else { sum - term };
    }
    sum /= Rational::from_integer(BigInt::from(e));
    // The rational partial sum agrees with the series to far more than `prec`
    // digits; reduce it at precision well above prec, then truncate.
    let wide = PadicNumber::from_rational(p, &sum, prec + 2).unwrap();
    wide + PadicNumber::approx_zero(p, prec as i64)
}

#[test]
fn make_padic_examples() {
    let ten = make_padic(5, 10, 1, 4).unwrap();
    assert_eq!(ten.valuation(), Some(1));
    assert_eq!(ten.unit(), 2);

    let half = make_padic(5, 1, 2, 4).unwrap();
    assert_eq!(half.valuation(), Some(0));
    assert_eq!(half.unit(), 313);

    let zero = make_padic(5, 0, 1, 4).unwrap();
    assert!(zero.is_exact_zero());
}

#[test]
fn make_padic_errors() {
    assert_eq!(make_padic(6, 1, 1, 4), Err(PadicError::NotPrime(6)));
    assert_eq!(make_padic(5, 1, 0, 4), Err(PadicError::ZeroDenominator));
    assert_eq!(make_padic(5, 1, 1, 0), Err(PadicError::InvalidPrecision(0)));
    assert!(matches!(make_padic(5, 1, 1, 40), Err(PadicError::PrecisionTooLarge { .. })));
}

#[test]
fn rational_round_trip_small() {
    let x = make_padic(7, -3, 49, 6).unwrap();
    assert_eq!(x.valuation(), Some(-2));
    let back = x * make_padic(7, 49, 1, 6).unwrap();
    assert!(back.agrees_with(&make_padic(7, -3, 1, 6).unwrap()));
    assert_eq!(back.to_small_integer(), Some(-3));
}

#[test]
fn addition_tracks_absolute_precision() {
    let a = make_padic(5, 1, 1, 4).unwrap(); // known mod 5^4
    let b = make_padic(5, 25, 1, 4).unwrap(); // known mod 5^6
    let s = a + b;
    assert_eq!(s.absolute_precision(), Some(4));
    let c = a - a;
    assert!(c.is_zero() && !c.is_exact_zero());
    assert_eq!(c.absolute_precision(), Some(4));
}

#[test]
fn log_of_p_is_lambda() {
    for p in [2u32, 3, 5, 7] {
        let l = iwasawa_log(&make_padic(p, p as i64, 1, 10).unwrap()).unwrap();
        assert!(l.constant_term().is_zero());
        assert_eq!(derive_at_zero(&l).to_small_integer(), Some(1));
    }
}

#[test]
fn log_of_one_vanishes() {
    let l = iwasawa_log(&make_padic(5, 1, 1, 8).unwrap()).unwrap();
    assert!(l.is_zero());
}

#[test]
fn log_of_six_matches_series() {
    let z = make_padic(5, 6, 1, 12).unwrap();
    let l = iwasawa_log(&z).unwrap();
    assert!(derive_at_zero(&l).is_zero());
    // Direct series Σ (−1)^(k+1) 5^k / k over ℚ.
    let mut sum = rational(0, 1);
    for k in 1..60i64 {
        let term = Rational::from_integer(num_traits::pow(BigInt::from(5), k as usize)) / rational(k, 1);
        sum = if k % 2 == 1 { sum + term } else { sum - term };
    }
    let expected = PadicNumber::from_rational(5, &sum, 12).unwrap();
    assert!(l.constant_term().agrees_with(&expected));
    assert_eq!(l.constant_term().absolute_precision(), Some(12));
}

#[test]
fn log_matches_independent_oracle() {
    for p in [2u32, 3, 5, 7] {
        for u in [1i64, 2, 3, 4, 5, 6, 11, 13, 29, 101, -7, 12345] {
            if u % p as i64 == 0 {
                continue;
            }
            let z = make_padic(p, u, 1, 12).unwrap();
            let l = iwasawa_log(&z).unwrap();
            let expected = log_oracle(p, u, 12);
            assert!(l.constant_term().agrees_with(&expected), "p={p} u={u}: {} vs {}", l.constant_term(), expected);
        }
    }
}

#[test]
fn teichmuller_is_root_of_unity() {
    let u = make_padic(7, 3, 1, 10).unwrap();
    let w = teichmuller(&u).unwrap();
    assert!(w.pow(6).agrees_with(&PadicNumber::one(7, 10).unwrap()));
    assert_eq!(w.residue(1), Some(3));
}

#[test]
fn derive_at_zero_examples() {
    let p = 5;
    let z = make_padic(p, 125 * 3, 1, 10).unwrap();
    assert_eq!(derive_at_zero(&iwasawa_log(&z).unwrap()).to_small_integer(), Some(3));
    let c = UniversalScalar::constant(make_padic(p, 7, 1, 10).unwrap());
    assert!(derive_at_zero(&c).is_zero());
}

#[test]
fn additivity_enumerated() {
    let p = 3;
    let values: Vec<i64> = (1..40).chain([-9, -2, 54, 81]).collect();
    for &a in &values {
        for &b in &values {
            let la = iwasawa_log(&make_padic(p, a, 1, 10).unwrap()).unwrap();
            let lb = iwasawa_log(&make_padic(p, b, 1, 10).unwrap()).unwrap();
            let d = derive_at_zero(&(la + lb)).to_small_integer();
            let nu = |n: i64| {
                let mut n = n.abs();
                let mut k = 0;
                while n % 3 == 0 {
                    n /= 3;
                    k += 1;
                }
                k
            };
            assert_eq!(d, Some(nu(a) + nu(b)), "a={a} b={b}");
        }
    }
}

#[test]
fn log_of_zero_is_error() {
    assert_eq!(iwasawa_log(&PadicNumber::zero(5)), Err(PadicError::LogOfZero));
}

#[test]
fn lambda_degree_cap_enforced() {
    let l = UniversalScalar::lambda(5, 6).unwrap().with_cap(2).unwrap();
    let l2 = l.checked_mul(&l).unwrap();
    assert_eq!(l2.degree(), Some(2));
    assert!(matches!(l2.checked_mul(&l), Err(PadicError::LambdaDegreeOverflow { degree: 3, cap: 2 })));
}

fn unit_strategy(p: u32) -> impl Strategy<Value = i64> {
    (1i64..1_000_000).prop_filter("unit", move |n| n % p as i64 != 0)
}

proptest! {
    #[test]
    fn log_is_homomorphism(
        p in prop::sample::select(vec![2u32, 3, 5, 7]),
        a in 1i64..1_000_000, b in 1i64..1_000_000,
        ea in 0u32..4, eb in 0u32..4,
    ) {
        let n = 15;
        let za = make_padic(p, a, 1, n).unwrap().shift(ea as i64);
        let zb = make_padic(p, b, 1, n).unwrap().shift(eb as i64);
        let lhs = iwasawa_log(&(za * zb)).unwrap();
        let rhs = iwasawa_log(&za).unwrap() + iwasawa_log(&zb).unwrap();
        prop_assert!(lhs.agrees_with(&rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn branch_derivative_is_valuation(p in prop::sample::select(vec![2u32, 3, 5, 7]), u in 1i64..1_000_000, e in -5i64..6) {
        prop_assume!(u % p as i64 != 0);
        let z = make_padic(p, u, 1, 20).unwrap().shift(e);
        prop_assert_eq!(derive_at_zero(&iwasawa_log(&z).unwrap()).to_small_integer(), Some(e));
    }

    #[test]
    fn specialization_is_ring_hom(
        a0 in -50i64..50, a1 in -50i64..50, b0 in -50i64..50, b1 in -50i64..50, c in -50i64..50,
    ) {
        let p = 7;
        let n = 8;
        let mk = |x: i64| make_padic(p, x, 1, n).unwrap();
        let a = UniversalScalar::from_coeffs(p, vec![mk(a0), mk(a1)], 4).unwrap();
        let b = UniversalScalar::from_coeffs(p, vec![mk(b0), mk(b1)], 4).unwrap();
        let c = mk(c);
        let prod = a.checked_mul(&b).unwrap();
        prop_assert!(prod.specialize(&c).agrees_with(&(a.specialize(&c) * b.specialize(&c))));
        prop_assert!((a.clone() + b.clone()).specialize(&c).agrees_with(&(a.specialize(&c) + b.specialize(&c))));
        // Leibniz rule for d/dΛ at 0.
        let lhs = derive_at_zero(&prod);
        let rhs = derive_at_zero(&a) * b.constant_term() + a.constant_term() * derive_at_zero(&b);
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn precision_never_increases(xs in prop::collection::vec((unit_strategy(5), 1u32..10, -3i64..3), 2..8)) {
        let p = 5;
        let nums: Vec<PadicNumber> = xs.iter().map(|&(u, n, v)| make_padic(p, u, 1, n).unwrap().shift(v)).collect();
        let min_rel = nums.iter().map(|x| x.precision()).min().unwrap();
        let prod = nums.iter().skip(1).fold(nums[0], |acc, x| acc * *x);
        prop_assert!(prod.precision() <= min_rel);
        let min_abs = nums.iter().map(|x| x.absolute_precision().unwrap()).min().unwrap();
        let sum = nums.iter().skip(1).fold(nums[0], |acc, x| acc + *x);
        prop_assert!(sum.absolute_precision().unwrap() <= min_abs);
    }
}
