//! Coherent states of the transformed system and the measure resolving them.
//!
//! `φ_z = N₁z L ψ_z = N Σ bₙ zⁿ φₙ` with `bₙ = |aₙ| N₀/Nₙ` and
//! `N = N₀z N₁z / N₀`. The resolving measure is `dν = h(|z|²) d²z` over the
//! unit disk, `d²z` being the area element.

use num_complex::Complex64;

use crate::darboux::{self, DarbouxContext};
use crate::error::{domain, Error, Result};
use crate::numerics::{tol, truncation_order, DiskQuadrature};
use crate::oscillator::{self, check_disk, log_coherent_coeff, n0z, ModelParams, RadialGrid};
use crate::specfun::{binomial, log_beta, log_gamma};

fn check_s(op: &'static str, s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(domain(op, format!("s = {s} must lie in [0, 1)")))
    }
}

/// `N₁z = √((1−s)/(4k+2p−2ps))`.
pub fn n1z(params: &ModelParams, s: f64) -> Result<f64> {
    check_s("n1z", s)?;
    let (k, p) = (params.k, params.p as f64);
    Ok(((1.0 - s) / (4.0 * k + 2.0 * p - 2.0 * p * s)).sqrt())
}

/// `N₀ = (4k+2p)^{−1/2}`, the `n = 0` Darboux normalization.
pub fn n_zero(params: &ModelParams) -> f64 {
    (2.0 * params.kp()).sqrt().recip()
}

/// Overall normalization `N = N₀z N₁z / N₀` of the series form.
pub fn total_norm(params: &ModelParams, s: f64) -> Result<f64> {
    Ok(n0z(params, s) * n1z(params, s)? / n_zero(params))
}

/// `ln bₙ`, `bₙ = |aₙ| √((n+2k+p)/(2k+p))`.
pub fn log_b(params: &ModelParams, n: usize) -> Result<f64> {
    let kp = params.kp();
    Ok(log_coherent_coeff(params, n)? + 0.5 * ((n as f64 + kp) / kp).ln())
}

pub fn b_coeff(params: &ModelParams, n: usize) -> Result<f64> {
    log_b(params, n).map(f64::exp)
}

/// Truncation order for `Σ bₙ rⁿ (…)` at radius `r`.
pub fn series_truncation(params: &ModelParams, r: f64, power: i32) -> Result<usize> {
    let log_r = r.ln();
    truncation_order(
        "transformed coherent series",
        |n| {
            log_b(params, n)
                .map(|l| (power as f64 * l + n as f64 * log_r).exp())
                .unwrap_or(f64::NAN)
        },
        tol::TRUNCATION,
        tol::TRUNCATION_CAP,
    )
}

/// A transformed coherent state held as its truncated coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedCoherentState {
    pub params: ModelParams,
    pub z: Complex64,
    /// `bₙ zⁿ` for `n = 0..=N_max`.
    pub coefficients: Vec<Complex64>,
    /// `N = N₀z N₁z / N₀`.
    pub norm: f64,
}

impl TransformedCoherentState {
    pub fn new(params: ModelParams, z: Complex64) -> Result<Self> {
        let s = check_disk("TransformedCoherentState", z)?;
        let n_max = series_truncation(&params, s.sqrt(), 1)?;
        let mut zn = Complex64::new(1.0, 0.0);
        let coefficients = (0..=n_max)
            .map(|n| {
                let c = zn * b_coeff(&params, n)?;
                zn *= z;
                Ok(c)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            params,
            z,
            coefficients,
            norm: total_norm(&params, s)?,
        })
    }

    /// `N Σ bₙ zⁿ φₙ(x)`.
    pub fn value(&self, x: f64) -> Result<Complex64> {
        let ctx = DarbouxContext::new(self.params);
        let sum = self.coefficients.iter().enumerate().try_fold(
            Complex64::new(0.0, 0.0),
            |acc, (n, c)| Ok::<_, Error>(acc + c * darboux::phi(&ctx, n, x)?),
        )?;
        Ok(sum * self.norm)
    }

    /// `Σ |bₙ zⁿ|² N²`, the coefficient-space norm.
    pub fn coefficient_norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.norm * self.norm
    }
}

/// `L ψ_z` without the cancellation of the `m/x` terms:
/// `−x ψ_z [(β+1)/2 + R]`, `β = (1+z)/(1−z)`.
fn l_psi_z(ctx: &DarbouxContext, z: Complex64, x: f64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let beta = (one + z) / (one - z);
    let (r, _) = ctx.ratio("phi_z", x)?;
    let psi = oscillator::coherent_psi(&ctx.params, z, x)?;
    Ok(-psi * x * ((beta + one) * 0.5 + r))
}

/// Closed-form `φ_z(x) = N₁z (L ψ_z)(x)`.
pub fn phi_z(params: &ModelParams, z: Complex64, x: f64) -> Result<Complex64> {
    let s = check_disk("phi_z", z)?;
    let ctx = DarbouxContext::new(*params);
    Ok(l_psi_z(&ctx, z, x)? * n1z(params, s)?)
}

/// `N Σ bₙ zⁿ φₙ(x)`, which must reproduce [`phi_z`].
pub fn phi_z_series(params: &ModelParams, z: Complex64, x: f64) -> Result<Complex64> {
    TransformedCoherentState::new(*params, z)?.value(x)
}

/// `⟨ψ_z|h₀−α|ψ_z⟩ = ‖Lψ_z‖²` on `grid`; equals `N₁z^{−2}`.
pub fn n1z_inv_sq_quadrature(params: &ModelParams, z: Complex64, grid: &RadialGrid) -> Result<f64> {
    check_disk("n1z_inv_sq_quadrature", z)?;
    let ctx = DarbouxContext::new(*params);
    let v = grid.nodes.iter().map(|&x| l_psi_z(&ctx, z, x)).collect::<Result<Vec<_>>>()?;
    Ok(grid.inner(&v, &v).re)
}

/// `⟨φ_z|φ_z⟩` on `grid`.
pub fn phi_z_norm_sq(params: &ModelParams, z: Complex64, grid: &RadialGrid) -> Result<f64> {
    let v = grid.nodes.iter().map(|&x| phi_z(params, z, x)).collect::<Result<Vec<_>>>()?;
    Ok(grid.inner(&v, &v).re)
}

fn check_unit_open(op: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(domain(op, format!("x = {x} must lie in (0, 1)")))
    }
}

/// `h(x)(1−x)²`, a polynomial of degree `p+1`.
pub(crate) fn measure_h_rim(params: &ModelParams, x: f64) -> Result<f64> {
    let (k, p) = (params.k, params.p);
    let pf = p as f64;
    let sum = (0..=p).try_fold(0.0, |acc, j| {
        let c = binomial(p, j)? as f64;
        Ok::<_, Error>(
            acc + c * x.powi(j as i32) * (1.0 - x).powi((p - j) as i32)
                / (2.0 * k + pf - j as f64 - 1.0),
        )
    })?;
    Ok((2.0 * k - 1.0) / std::f64::consts::PI * (2.0 * k + pf - pf * x) * sum)
}

/// Density `h(x)` of the transformed measure, `x = |z|²`.
pub fn measure_h(params: &ModelParams, x: f64) -> Result<f64> {
    check_unit_open("measure_h", x)?;
    Ok(measure_h_rim(params, x)? / ((1.0 - x) * (1.0 - x)))
}

/// Right side of the moment identity, `n! Γ(2k) / (Γ(n+2k)(n+2k+p))`.
pub fn moment_rhs(params: &ModelParams, n: usize) -> Result<f64> {
    let (two_k, nf) = (2.0 * params.k, n as f64);
    let log = log_gamma(nf + 1.0)? + log_gamma(two_k)? - log_gamma(nf + two_k)?;
    Ok(log.exp() / (nf + params.kp()))
}

/// Rim exponent absorbing `(1−x)^{2k+1} h(x)`.
pub fn transformed_rim_exponent(params: &ModelParams) -> f64 {
    2.0 * params.k - 1.0
}

/// `π ∫₀¹ h(x) xⁿ (1−x)^{2k+1} / (2k+p−px) dx` by Gauss–Jacobi, checked
/// against a rule of twice the size.
pub fn moment_lhs(params: &ModelParams, n: usize) -> Result<f64> {
    let gamma = transformed_rim_exponent(params);
    let kp = params.kp();
    let pf = params.p as f64;
    let g = |x: f64| {
        std::f64::consts::PI * measure_h_rim(params, x).unwrap_or(f64::NAN) * x.powi(n as i32)
            / (kp - pf * x)
    };
    let nodes = (n + params.p as usize) / 2 + 8;
    let coarse = DiskQuadrature::new(gamma, nodes, 1)?.integrate_radial(g);
    let fine = DiskQuadrature::new(gamma, 2 * nodes, 1)?.integrate_radial(g);
    if !((fine - coarse).abs() <= tol::REDUCTION * fine.abs()) {
        return Err(Error::NonConvergence {
            what: "moment_lhs",
            coarse,
            refined: fine,
        });
    }
    Ok(fine)
}

/// Which Beta index to use in the term-wise moment identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaIndex {
    /// `B(n+j+1, 2k+p−j)`, from integrating term by term.
    Derived,
    /// `B(n+j−1, 2k+p−j)`, as usually printed; undefined at `n = j = 0`.
    Printed,
}

/// `Σ_j C(p,j) (2k−1)/(2k+p−j−1) B(·, 2k+p−j)`.
pub fn beta_sum(params: &ModelParams, n: usize, index: BetaIndex) -> Result<f64> {
    let (k, p) = (params.k, params.p);
    let pf = p as f64;
    (0..=p).try_fold(0.0, |acc, j| {
        let jf = j as f64;
        let a = match index {
            BetaIndex::Derived => n as f64 + jf + 1.0,
            BetaIndex::Printed => n as f64 + jf - 1.0,
        };
        let term = binomial(p, j)? as f64 * (2.0 * k - 1.0) / (2.0 * k + pf - jf - 1.0)
            * log_beta(a, 2.0 * k + pf - jf)?.exp();
        Ok(acc + term)
    })
}

/// `(m, n)` element of `∫|φ_z⟩⟨φ_z| dν` in the `{φₙ}` basis. The angular
/// integral is done exactly, so off-diagonal elements are zero; the diagonal
/// is `π ∫₀¹ N_z² bₙ² sⁿ h(s) ds`.
pub fn resolution_check_transformed(params: &ModelParams, m: usize, n: usize) -> Result<Complex64> {
    if m != n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let gamma = transformed_rim_exponent(params);
    let kp = params.kp();
    let pf = params.p as f64;
    let b2 = 2.0 * log_b(params, n)?;
    // N_z² = (1−s)^{2k+1}(2k+p)/(2k+p−ps); (1−s)^{2k−1} is in the rule
    let g = |s: f64| {
        std::f64::consts::PI * kp / (kp - pf * s)
            * (b2 + n as f64 * s.ln()).exp()
            * measure_h_rim(params, s).unwrap_or(f64::NAN)
    };
    let nodes = n / 2 + params.p as usize + 16;
    let coarse = DiskQuadrature::new(gamma, nodes, 1)?.integrate_radial(g);
    let fine = DiskQuadrature::new(gamma, 2 * nodes, 1)?.integrate_radial(g);
    if !((fine - coarse).abs() <= tol::CHECK * 1e-3) {
        return Err(Error::NonConvergence {
            what: "resolution_check_transformed",
            coarse,
            refined: fine,
        });
    }
    Ok(Complex64::new(fine, 0.0))
}

/// Which sign to use in the numerator of the transformed overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapSign {
    /// `2k+p−pζz`, the sign the coefficient series produces.
    Minus,
    /// `2k+p+pζz`, as usually printed.
    Plus,
}

/// Closed-form overlap `ζ⁽¹⁾(z) = N_z^{−1}⟨φ_z̄|φ_ζ⟩` with the chosen numerator sign.
pub fn zeta1_with(
    params: &ModelParams,
    zeta: Complex64,
    z: Complex64,
    sign: OverlapSign,
) -> Result<Complex64> {
    let s = check_disk("zeta1", zeta)?;
    let (k, kp, pf) = (params.k, params.kp(), params.p as f64);
    let t = zeta * z;
    if !(t.norm() < 1.0) {
        return Err(domain("zeta1", format!("|ζz| = {} must be < 1", t.norm())));
    }
    let numerator = match sign {
        OverlapSign::Minus => kp - t * pf,
        OverlapSign::Plus => kp + t * pf,
    };
    let one = Complex64::new(1.0, 0.0);
    Ok(numerator / kp.sqrt() * (1.0 - s).powf(k + 0.5) * (one - t).powf(-(2.0 * k + 1.0))
        / (kp - pf * s).sqrt())
}

pub fn zeta1(params: &ModelParams, zeta: Complex64, z: Complex64) -> Result<Complex64> {
    zeta1_with(params, zeta, z, OverlapSign::Minus)
}

/// `N_ζ Σ bₙ² (ζz)ⁿ`.
pub fn zeta1_series(params: &ModelParams, zeta: Complex64, z: Complex64) -> Result<Complex64> {
    let s = check_disk("zeta1_series", zeta)?;
    let t = zeta * z;
    if !(t.norm() < 1.0) {
        return Err(domain("zeta1_series", format!("|ζz| = {} must be < 1", t.norm())));
    }
    let n_max = series_truncation(params, t.norm(), 2)?;
    let mut tn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..=n_max {
        sum += tn * (2.0 * log_b(params, n)?).exp();
        tn *= t;
    }
    Ok(sum * total_norm(params, s)?)
}
