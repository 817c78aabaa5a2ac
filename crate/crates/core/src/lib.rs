//! Exact computations behind branch derivatives of Vologodsky integrals on
//! semi-stable curves.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! - [`padic`]: truncated ℚ_p arithmetic, the universal logarithm, Λ = log(p).
//! - [`linalg`]: exact rational matrices and fraction-free elimination.
//! - [`graph`]: cochains on a dual graph, d, d*, Δ, harmonic projection.
//! - [`loglaurent`]: Laurent series with log terms on an annulus, residues,
//!   the local index.
//! - [`volog`]: assembly of Vologodsky integrals from local data and their
//!   Λ-derivatives.
//! - [`heights`]: the intersection-theoretic part of local heights.
//! - [`fpn`]: filtered Frobenius-monodromy modules and the canonical
//!   splitting of extension classes.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod fpn;
pub mod graph;
pub mod heights;
pub mod linalg;
pub mod loglaurent;
pub mod padic;
pub mod scalar;
pub mod volog;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

pub use scalar::{Coefficient, Scalar};

/// Coarse classification of errors, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A mathematical precondition does not hold for the input.
    Precondition,
    /// A precision, Λ-degree, log-degree or Laurent-window bound was exceeded.
    Overflow,
}
