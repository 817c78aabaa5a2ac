use super::number::{inv_mod, mul_mod, pow_mod, split_p};
use super::{modulus, PadicError, PadicNumber, UniversalScalar};

/// ⌊log_p k⌋, an upper bound for ν_p(k).
fn floor_log(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut q = k;
    while q >= p {
        q /= p;
        e += 1;
    }
    e
}

/// Teichmüller representative ω(u) of a unit `u`.
///
/// For odd p this is lim u^(p^k), computed as u^(p^(N−1)) mod p^N. For p = 2
/// the roots of unity in ℤ₂ are ±1 and ω(u) = ±1 according to u mod 4.
pub fn teichmuller(u: &PadicNumber) -> Result<PadicNumber, PadicError> {
    if u.valuation() != Some(0) {
        return Err(PadicError::LogOfZero);
    }
    let p = u.prime();
    let n = u.precision();
    let m = modulus(p, n)?;
    let residue = if p == 2 {
        if u.unit() % 4 == 1 || n == 1 {
            1 % m
        } else {
            m - 1
        }
    } else {
        let mut x = u.unit() % m;
        for _ in 1..n {
            x = pow_mod(x, p as u64, m);
        }
        x
    };
    PadicNumber::new(p, 0, residue, n)
}

/// log(1 + x) for `x` ≡ 0 mod p (mod 4 when p = 2), given as a residue modulo
/// p^`digits`; returns the residue of the logarithm modulo p^`digits`.
///
/// Term k of Σ (−1)^(k+1) x^k / k has valuation at least k·e − ⌊log_p k⌋ with
/// e = ν(x) ≥ 1 (≥ 2 for p = 2). That bound is nondecreasing in k, so the
/// series stops at the first k where it reaches `digits`. Division by
/// k = p^s·k' costs s digits, so powers of x are kept modulo p^(digits + g)
/// with g the largest ⌊log_p k⌋ among the retained terms.
pub fn log_one_unit(p: u32, x: u64, digits: u32) -> Result<u64, PadicError> {
    let pp = p as u64;
    let e: u64 = if p == 2 { 2 } else { 1 };
    let target = modulus(p, digits)?;
    let mut terms = 0u64;
    while (terms + 1) * e < digits as u64 + floor_log(terms + 1, pp) as u64 {
        terms += 1;
    }
    let guard = floor_log(terms.max(1), pp);
    let wide = modulus(p, digits + guard)?;
    let x = x % target;
    let mut power = 1 % wide;
    let mut acc = 0u64;
    for k in 1..=terms {
        power = mul_mod(power, x, wide);
        let (s, k_unit) = split_p(k, p);
        let divided = (power / pp.pow(s)) % target;
        let term = mul_mod(divided, inv_mod(k_unit % target, target), target);
        acc = if k % 2 == 1 { (acc + term) % target } else { (acc + target - term) % target };
    }
    Ok(acc)
}

/// The universal (Iwasawa-normalized) logarithm of a nonzero `z`:
/// log(z) = log(z / p^ν(z)) + ν(z)·Λ.
///
/// The unit part is split as u = ω(u)·⟨u⟩ and log ω(u) = 0, so the constant
/// term is the 1-unit series on ⟨u⟩. The constant term is known to absolute
/// precision N, the relative precision of `z`.
pub fn iwasawa_log(z: &PadicNumber) -> Result<UniversalScalar, PadicError> {
    let nu = z.valuation().ok_or(PadicError::LogOfZero)?;
    let p = z.prime();
    let n = z.precision();
    let u = PadicNumber::new(p, 0, z.unit(), n)?;
    let omega = teichmuller(&u)?;
    let one_unit = u.checked_div(&omega)?;
    let m = modulus(p, n)?;
    let x = (one_unit.residue(n).expect("unit has valuation 0") + m - 1) % m;
    let log_residue = log_one_unit(p, x, n)?;
    let constant =
        if log_residue == 0 { PadicNumber::approx_zero(p, n as i64) } else { PadicNumber::new(p, 0, log_residue, n)? };
    let slope = PadicNumber::from_integer(p, nu, n)?;
    UniversalScalar::from_coeffs(p, alloc::vec![constant, slope], super::DEFAULT_LAMBDA_CAP)
}
