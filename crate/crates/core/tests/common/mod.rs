//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use volog_core::fpn::{Filtration, FpnModule, StTriple};
use volog_core::graph::{Cochain, DualGraph};
use volog_core::linalg::{self, Matrix};
use volog_core::loglaurent::{LogLaurentFunction, SeriesConfig};
use volog_core::padic::{PadicNumber, UniversalScalar};
use volog_core::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A random connected simple graph on `n` vertices: a random spanning tree
/// plus extra edges, each stored in a random orientation.
pub fn random_graph(rng: &mut impl Rng, n: usize) -> DualGraph {
    let mut pairs = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        pairs.insert((parent.min(child), parent.max(child)));
    }
    let extra = if n > 2 { rng.gen_range(0..=n) } else { 0 };
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<(usize, usize)> =
        pairs.into_iter().map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) }).collect();
    DualGraph::from_indices(n, &edges).expect("connected by construction")
}

pub fn random_cochain(rng: &mut impl Rng, g: &DualGraph) -> Cochain<Rational> {
    Cochain::new((0..g.edge_count()).map(|_| small_rational(rng)).collect())
}

/// A harmonic cochain: a random cochain minus its exact part.
pub fn random_harmonic(rng: &mut impl Rng, g: &DualGraph) -> Cochain<Rational> {
    g.harmonic_project(&random_cochain(rng, g), 0).expect("connected").0
}

pub fn padic(p: u32, r: &Rational, prec: u32) -> PadicNumber {
    PadicNumber::from_rational(p, r, prec).expect("valid rational")
}

pub fn uscalar(p: u32, r: &Rational, prec: u32) -> UniversalScalar {
    padic(p, r, prec).into()
}

pub fn random_log_laurent(
    rng: &mut impl Rng,
    p: u32,
    prec: u32,
    config: SeriesConfig,
    max_log: u32,
    terms: usize,
) -> LogLaurentFunction {
    let mut f = LogLaurentFunction::zero(config);
    for _ in 0..terms {
        let k = rng.gen_range(-config.window..=config.window);
        let n = rng.gen_range(0..=max_log);
        f.add_term(k, n, uscalar(p, &small_rational(rng), prec)).expect("within window");
    }
    f
}

/// Dense Gauss–Jordan solve over ℚ with partial pivoting on the first
/// nonzero entry; returns `None` for singular systems.
pub fn gauss_jordan(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
                let bc = b[col].clone();
                b[r] -= &f * bc;
            }
        }
    }
    Some(b)
}

fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-3..=3), 1)).collect()).collect();
        let m = Matrix::from_rows(rows).expect("square");
        if n == 0 || linalg::rank(&m) == n {
            return m;
        }
    }
}

/// Which normalization case a generated module should satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleShape {
    NoWeightZero,
    MonodromyIsomorphism,
}

/// A random valid module built from monodromy chains: each chain is a run of
/// basis vectors of weights `k, k−2, …` with `N` stepping down it and `φ`
/// acting by `λ, λ/p, …`, then conjugated by a random weight-preserving
/// change of basis.
pub fn random_module(rng: &mut impl Rng, p: u32, max_dim: usize, shape: ModuleShape) -> FpnModule {
    loop {
        if let Some(m) = try_random_module(rng, p, max_dim, shape) {
            if m.validate().is_ok() {
                return m;
            }
        }
    }
}

fn try_random_module(rng: &mut impl Rng, p: u32, max_dim: usize, shape: ModuleShape) -> Option<FpnModule> {
    let templates: &[&[i32]] = match shape {
        ModuleShape::NoWeightZero => &[&[-2], &[-2, -4], &[2], &[4, 2], &[1, -1, -3], &[-1], &[3], &[-2, -4, -6]],
        ModuleShape::MonodromyIsomorphism => &[&[0, -2], &[2, 0, -2], &[4], &[-4, -6], &[3, 1], &[-1, -3]],
    };
    let mut chains: Vec<Vec<i32>> = Vec::new();
    let mut dim = 0;
    let target = rng.gen_range(1..=max_dim);
    if shape == ModuleShape::MonodromyIsomorphism {
        chains.push(vec![0, -2]);
        dim = 2;
    }
    while dim < target {
        let t = templates.choose(rng).unwrap();
        if dim + t.len() > max_dim {
            break;
        }
        chains.push(t.to_vec());
        dim += t.len();
    }
    let mut weights = Vec::new();
    let mut eigen = Vec::new();
    let mut steps = Vec::new();
    let pq = q(p as i64, 1);
    for chain in &chains {
        let lambda = nonzero_rational(rng) * num_traits::pow(pq.clone(), rng.gen_range(0..3));
        let start = weights.len();
        for (i, &w) in chain.iter().enumerate() {
            weights.push(w);
            eigen.push(&lambda / num_traits::pow(pq.clone(), i));
            if i > 0 {
                steps.push((start + i - 1, start + i, nonzero_rational(rng)));
            }
        }
    }
    let n = weights.len();
    let mut phi = Matrix::diagonal(&eigen);
    let mut mono = Matrix::zeros(n, n);
    for (from, to, c) in steps {
        mono.set(to, from, c);
    }
    // Weight-preserving change of basis.
    let mut s = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && weights[i] == weights[j] && rng.gen_bool(0.5) {
                s.set(i, j, q(rng.gen_range(-2..=2), 1));
            }
        }
    }
    let s_inv = linalg::inverse(&s).ok()?;
    phi = s.mul(&phi).mul(&s_inv);
    mono = s.mul(&mono).mul(&s_inv);
    let f0_dim = rng.gen_range(0..=n);
    let f0_rows: Vec<Vec<Rational>> =
        (0..f0_dim).map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2), 1)).collect()).collect();
    let filtration =
        if f0_rows.is_empty() { Filtration::zero() } else { Filtration::f0(Matrix::from_rows(f0_rows).ok()?) };
    Some(FpnModule { prime: p, phi, monodromy: mono, weights, filtration, comparison: random_invertible(rng, n) })
}

/// A random cocycle: a random element of `ker(x, y ↦ Nx + (1 − pφ)y)` with
/// a random `z`.
pub fn random_cocycle(rng: &mut impl Rng, m: &FpnModule) -> StTriple<Rational> {
    let n = m.dim();
    let one_minus = Matrix::identity(n).sub(&m.twisted_phi());
    let rows = (0..n)
        .map(|i| m.monodromy.row(i).iter().chain(one_minus.row(i)).cloned().collect())
        .collect::<Vec<Vec<Rational>>>();
    let kernel = if n == 0 { Vec::new() } else { linalg::nullspace(&Matrix::from_rows(rows).expect("rectangular")) };
    let mut xy = vec![Rational::zero(); 2 * n];
    for v in &kernel {
        let c = small_rational(rng);
        for (acc, x) in xy.iter_mut().zip(v) {
            *acc += &c * x;
        }
    }
    let z = (0..n).map(|_| small_rational(rng)).collect();
    StTriple { x: xy[..n].to_vec(), y: xy[n..].to_vec(), z }
}

pub fn unit_one(p: u32, prec: u32) -> UniversalScalar {
    PadicNumber::one(p, prec).expect("valid").into()
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}
