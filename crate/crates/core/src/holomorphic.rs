//! Holomorphic representation on the unit disk.
//!
//! A state is a power series `f(z) = Σ dₙ zⁿ`; [`HoloSeries`] stores the
//! monomial coefficients `dₙ`. Basis functions are `ψₙ(z) = aₙ zⁿ` for the
//! initial system and `φₙ(z) = bₙ zⁿ` for the transformed one. Operators act
//! as exact index maps on `dₙ`.
//!
//! Inner products carry the weight `e^{−f⁽⁰⁾} dμ = (2k−1)/π (1−s)^{2k−2} d²z`
//! and `e^{−f⁽¹⁾} dν = (2k+p)(1−s)^{2k+1} h(s)/(2k+p−ps) d²z`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{disk_integrate, tol, truncation_order, DiskQuadrature, QuadratureResult};
use crate::oscillator::{self, check_disk, log_coherent_coeff, ModelParams};
use crate::transformed_coherent::{self as tc, log_b, measure_h_rim};
use crate::System;

/// `cₙ²` for `n ≤ n_max` from `aₙ² = aₙ₋₁² (n−1+2k)/n` and
/// `bₙ² = aₙ² (n+2k+p)/(2k+p)`; the products keep `√n ε` accuracy where
/// exponentiating `2 ln cₙ` would lose `|ln cₙ| ε`.
pub(crate) fn squared_basis_coeffs(system: System, params: &ModelParams, n_max: usize) -> Vec<f64> {
    let (two_k, kp) = (2.0 * params.k, params.kp());
    let mut a2 = 1.0;
    (0..=n_max)
        .map(|n| {
            let nf = n as f64;
            if n > 0 {
                a2 *= (nf - 1.0 + two_k) / nf;
            }
            match system {
                System::Initial => a2,
                System::Transformed => a2 * (nf + kp) / kp,
            }
        })
        .collect()
}

/// Operators of the initial system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialOp {
    K0,
    KPlus,
    KMinus,
}

/// Operators of the transformed system, plus the intertwiners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformedOp {
    P0,
    /// `2z³d² + 2(4k+p+2)z²d + 4k(2k+p+1)z`, consistent with the ladder matrix elements.
    PPlus,
    /// `2z³d² + 2z(2k+p+2)(z d + 2k)`, the commonly printed form.
    PPlusPrinted,
    PMinus,
    L,
    LDag,
}

/// `ln` of the basis coefficient, `ln|aₙ|` or `ln bₙ`.
pub fn log_basis_coeff(system: System, params: &ModelParams, n: usize) -> Result<f64> {
    match system {
        System::Initial => log_coherent_coeff(params, n),
        System::Transformed => log_b(params, n),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoloSeries {
    pub system: System,
    pub params: ModelParams,
    pub coeffs: Vec<Complex64>,
}

impl HoloSeries {
    pub fn new(system: System, params: ModelParams, coeffs: Vec<Complex64>) -> Self {
        Self { system, params, coeffs }
    }

    /// `zⁿ`.
    pub fn monomial(system: System, params: ModelParams, n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::new(system, params, coeffs)
    }

    /// The normalized basis function `aₙzⁿ` or `bₙzⁿ`.
    pub fn basis(system: System, params: ModelParams, n: usize) -> Result<Self> {
        let mut s = Self::monomial(system, params, n);
        s.coeffs[n] *= log_basis_coeff(system, &params, n)?.exp();
        Ok(s)
    }

    /// Reproducing kernel `δ(·, w̄)` truncated by the crate rule.
    pub fn kernel(system: System, params: ModelParams, w_conj: Complex64) -> Result<Self> {
        let n_max = kernel_truncation(system, &params, w_conj.norm())?;
        let mut wn = Complex64::new(1.0, 0.0);
        let coeffs = squared_basis_coeffs(system, &params, n_max)
            .into_iter()
            .map(|c| {
                let term = wn * c;
                wn *= w_conj;
                term
            })
            .collect();
        Ok(Self::new(system, params, coeffs))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Self {
        Self::new(self.system, self.params, coeffs)
    }

    fn raised_len(&self) -> Result<usize> {
        let len = self.coeffs.len() + 1;
        if len > tol::TRUNCATION_CAP + 1 {
            return Err(Error::Truncation {
                what: "holomorphic operator",
                budget: tol::TRUNCATION_CAP,
                ratio: self.coeffs.last().map_or(0.0, |c| c.norm()),
            });
        }
        Ok(len)
    }

    /// `cₙ → f(n) cₙ`.
    fn diagonal(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_coeffs(
            self.coeffs.iter().enumerate().map(|(n, c)| c * f(n as f64)).collect(),
        )
    }

    /// `zⁿ → f(n) z^{n−1}`.
    fn lower(&self, f: impl Fn(f64) -> f64) -> Self {
        let coeffs = if self.coeffs.len() <= 1 {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            (1..self.coeffs.len()).map(|n| self.coeffs[n] * f(n as f64)).collect()
        };
        self.with_coeffs(coeffs)
    }

    /// `zⁿ → f(n) z^{n+1}`.
    fn raise(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.raised_len()?];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n + 1] = c * f(n as f64);
        }
        Ok(self.with_coeffs(coeffs))
    }

    fn expect_system(&self, system: System, op: &'static str) -> Result<()> {
        if self.system == system {
            Ok(())
        } else {
            Err(Error::Usage(format!("{op} acts on {system:?} series, got {:?}", self.system)))
        }
    }
}

pub fn apply_op_initial(op: InitialOp, series: &HoloSeries) -> Result<HoloSeries> {
    series.expect_system(System::Initial, "apply_op_initial")?;
    let k = series.params.k;
    match op {
        InitialOp::K0 => Ok(series.diagonal(|n| n + k)),
        InitialOp::KMinus => Ok(series.lower(|n| n)),
        InitialOp::KPlus => series.raise(|n| n + 2.0 * k),
    }
}

/// Transformed operators. `L` and `L⁺` act on the series in place; they map
/// between the two systems only through the coefficient convention, so the
/// system tag is left unchanged.
pub fn apply_op_transformed(op: TransformedOp, series: &HoloSeries) -> Result<HoloSeries> {
    let (k, p) = (series.params.k, series.params.p as f64);
    let kp = 2.0 * k + p;
    match op {
        TransformedOp::P0 => Ok(series.diagonal(|n| n + k)),
        TransformedOp::PMinus => Ok(series.lower(|n| 2.0 * n * (n - 1.0 + kp))),
        TransformedOp::PPlus => series.raise(|n| 2.0 * (n + 2.0 * k) * (n + kp + 1.0)),
        TransformedOp::PPlusPrinted => {
            series.raise(|n| 2.0 * n * (n - 1.0) + 2.0 * (kp + 2.0) * (n + 2.0 * k))
        }
        TransformedOp::L => Ok(series.diagonal(|n| (2.0 / kp).sqrt() * (n + kp))),
        TransformedOp::LDag => Ok(series.diagonal(|_| (2.0 * kp).sqrt())),
    }
}

/// `Σ conj(dₙ) d′ₙ / cₙ²` with `cₙ` the basis coefficient.
pub fn inner_product_coeff(a: &HoloSeries, b: &HoloSeries) -> Result<Complex64> {
    if a.system != b.system {
        return Err(Error::Usage("inner product of series from different systems".into()));
    }
    a.coeffs.iter().zip(&b.coeffs).enumerate().try_fold(
        Complex64::new(0.0, 0.0),
        |acc, (n, (x, y))| {
            Ok(acc + x.conj() * y * (-2.0 * log_basis_coeff(a.system, &a.params, n)?).exp())
        },
    )
}

/// Rim exponent of the z-space weight.
pub fn rim_exponent(system: System, params: &ModelParams) -> f64 {
    match system {
        System::Initial => oscillator::initial_rim_exponent(params),
        System::Transformed => tc::transformed_rim_exponent(params),
    }
}

/// Smooth part of the weight once `(1−s)^γ` has been taken out.
fn weight_smooth(system: System, params: &ModelParams, s: f64) -> f64 {
    match system {
        System::Initial => (2.0 * params.k - 1.0) / std::f64::consts::PI,
        System::Transformed => {
            let kp = params.kp();
            kp / (kp - params.p as f64 * s) * measure_h_rim(params, s).unwrap_or(f64::NAN)
        }
    }
}

/// Disk quadrature of `conj(f₁) f₂` against the system weight, checked
/// against a refined rule.
pub fn inner_product_holo(
    a: &HoloSeries,
    b: &HoloSeries,
    tol: f64,
) -> Result<QuadratureResult<Complex64>> {
    if a.system != b.system {
        return Err(Error::Usage("inner product of series from different systems".into()));
    }
    let system = a.system;
    let params = a.params;
    let degree = a.degree().max(b.degree());
    let quad = DiskQuadrature::new(rim_exponent(system, &params), degree + 8, (2 * degree + 2).max(64))?;
    disk_integrate(
        |z| a.eval(z).conj() * b.eval(z) * weight_smooth(system, &params, z.norm_sqr()),
        &quad,
        tol,
    )
}

fn kernel_truncation(system: System, params: &ModelParams, r: f64) -> Result<usize> {
    if r == 0.0 {
        return Ok(0);
    }
    let log_r = r.ln();
    truncation_order(
        "kernel series",
        |n| {
            log_basis_coeff(system, params, n)
                .map(|l| (2.0 * l + n as f64 * log_r).exp())
                .unwrap_or(f64::NAN)
        },
        tol::KERNEL_TRUNCATION,
        tol::TRUNCATION_CAP,
    )
}

fn check_product(op: &'static str, t: Complex64) -> Result<()> {
    if t.norm() < 1.0 {
        Ok(())
    } else {
        Err(domain(op, format!("|z w̄| = {} must be < 1", t.norm())))
    }
}

/// `δ⁽⁰⁾(z, w̄) = (1 − z w̄)^{−2k}`.
pub fn bergman0(params: &ModelParams, z: Complex64, w_conj: Complex64) -> Result<Complex64> {
    let t = z * w_conj;
    check_product("bergman0", t)?;
    Ok((Complex64::new(1.0, 0.0) - t).powf(-2.0 * params.k))
}

/// `δ⁽¹⁾(z, w̄) = (1 − z w̄)^{−2k−1} (2k+p−p z w̄)/(2k+p)`.
pub fn bergman1(params: &ModelParams, z: Complex64, w_conj: Complex64) -> Result<Complex64> {
    let t = z * w_conj;
    check_product("bergman1", t)?;
    let kp = params.kp();
    Ok((Complex64::new(1.0, 0.0) - t).powf(-2.0 * params.k - 1.0) * (kp - t * params.p as f64) / kp)
}

/// `Σ cₙ² (z w̄)ⁿ`, the kernel as a truncated series.
pub fn bergman_series(
    system: System,
    params: &ModelParams,
    z: Complex64,
    w_conj: Complex64,
) -> Result<Complex64> {
    let t = z * w_conj;
    check_product("bergman_series", t)?;
    Ok(HoloSeries::kernel(system, *params, t)?.eval(Complex64::new(1.0, 0.0)))
}

pub fn bergman(system: System, params: &ModelParams, z: Complex64, w_conj: Complex64) -> Result<Complex64> {
    match system {
        System::Initial => bergman0(params, z, w_conj),
        System::Transformed => bergman1(params, z, w_conj),
    }
}

/// `ζ⁽⁰⁾(z) = (1−|ζ|²)^k (1−ζz)^{−2k}`.
pub fn coherent_overlap_initial(params: &ModelParams, zeta: Complex64, z: Complex64) -> Result<Complex64> {
    let s = check_disk("coherent_overlap_initial", zeta)?;
    Ok(bergman0(params, zeta, z)? * (1.0 - s).powf(params.k))
}

/// `(1−|ζ|²)^k Σ aₙ² ζⁿ zⁿ`.
pub fn coherent_overlap_initial_series(
    params: &ModelParams,
    zeta: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    let s = check_disk("coherent_overlap_initial", zeta)?;
    Ok(bergman_series(System::Initial, params, zeta, z)? * (1.0 - s).powf(params.k))
}
