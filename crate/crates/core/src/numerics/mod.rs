//! Quadrature engines, finite-difference stencils and series truncation
//! shared by the physics modules.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub mod quadrature;
pub mod stencil;

pub use quadrature::{
    disk_integrate, halfline_integrate, DiskQuadrature, GaussRule, QuadratureResult,
    QuadratureSpec, Scheme,
};
pub use stencil::{d1_at, d2_at, radial_step, stencil_d1, stencil_d2, try_window};

/// Real or complex sample values.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + std::fmt::Debug
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Central tolerance ladder. Every acceptance threshold in the crate is one
/// of these.
pub mod tol {
    /// Finite-difference residuals of eigen, factorization and intertwining relations.
    pub const STENCIL_RESIDUAL: f64 = 1e-5;
    /// Quadrature-based checks: resolutions of identity, normalization constants, curvature.
    pub const CHECK: f64 = 1e-6;
    /// Classical bracket relations evaluated with stencil derivatives.
    pub const BRACKET: f64 = 1e-7;
    /// Inner products, orthonormality, trajectory coincidence, metric from potential.
    pub const INNER_PRODUCT: f64 = 1e-8;
    /// Moment identity, commutator identity, conservation of `|z|`.
    pub const MOMENT: f64 = 1e-9;
    /// Series against closed forms (Bergman kernels, overlaps).
    pub const SERIES: f64 = 1e-10;
    /// Analytic substitution checks.
    pub const REDUCTION: f64 = 1e-12;
    /// Relative size at which a coefficient series is cut off.
    pub const TRUNCATION: f64 = 1e-14;
    /// Cut-off for kernel series: below the rounding of `Σ|terms|`, because
    /// for `zw̄` away from the positive axis the terms cancel strongly.
    pub const KERNEL_TRUNCATION: f64 = 1e-17;
    /// Hard cap on coefficient-series length.
    pub const TRUNCATION_CAP: usize = 400;
}

/// Smallest `N` such that `|term(N)| / max_{n≤N} Σ|term| < rel_tol`.
///
/// The returned order is inclusive: the caller keeps terms `0..=N`.
pub fn truncation_order(
    what: &'static str,
    mut term: impl FnMut(usize) -> f64,
    rel_tol: f64,
    cap: usize,
) -> Result<usize> {
    let mut accumulated: f64 = 0.0;
    let mut ratio = f64::INFINITY;
    for n in 0..=cap {
        let t = term(n).abs();
        accumulated += t;
        ratio = t / accumulated.max(f64::MIN_POSITIVE);
        if n > 0 && ratio < rel_tol {
            return Ok(n);
        }
    }
    Err(Error::Truncation {
        what,
        budget: cap,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_of_geometric_series() {
        let n = truncation_order("geo", |n| 0.5f64.powi(n as i32), 1e-14, 400).unwrap();
        // 0.5^n / 2 < 1e-14
        assert_eq!(n, 46);
    }

    #[test]
    fn truncation_budget_exhausted() {
        let r = truncation_order("slow", |n| 0.999f64.powi(n as i32), 1e-14, 400);
        assert!(matches!(r, Err(Error::Truncation { budget: 400, .. })));
    }
}
