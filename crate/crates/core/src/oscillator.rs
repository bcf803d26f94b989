//! The initial system: the singular oscillator `h₀ = −d²/dx² + x²/4 + b/x²`
//! on the half-line, its eigenfunctions, su(1,1) coherent states and the
//! disk measure that resolves the identity.
//!
//! Phase convention: the algebraic kets `|n⟩` reached by repeated `k₊` are
//! `(−1)ⁿ ψₙ(x)`, where `ψₙ` is the positive-leading-coefficient Laguerre
//! eigenfunction returned by [`psi`]. Coordinate-space coherent-state series
//! therefore carry `|aₙ|` rather than `aₙ`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{
    self, disk_integrate, radial_step, stencil, truncation_order, try_window, DiskQuadrature,
    GaussRule, QuadratureResult,
};
use crate::specfun::{laguerre, laguerre_all, log_gamma};

/// The bundle `(b, k, p, α)` fixing both the initial and the transformed system.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModelParams {
    /// Barrier strength in `b/x²`.
    pub b: f64,
    /// Bargmann index `k = 1/2 + √(1+4b)/4`.
    pub k: f64,
    /// Index of the transformation function `u_p`.
    pub p: u32,
    /// Factorization energy `α = −2(k+p)`.
    pub alpha: f64,
}

pub fn make_params(b: f64, p: u32) -> Result<ModelParams> {
    if !(b >= 0.0) || !b.is_finite() {
        return Err(domain("make_params", format!("b = {b} must be finite and ≥ 0")));
    }
    let k = 0.5 + 0.25 * (1.0 + 4.0 * b).sqrt();
    Ok(ModelParams {
        b,
        k,
        p,
        alpha: -2.0 * (k + p as f64),
    })
}

impl ModelParams {
    /// Parameters with a prescribed Bargmann index; `b` is recovered from `k`.
    /// Used to compare the `p = 0` transformed objects with the initial ones
    /// at `k′ = k + 1/2`.
    pub fn from_k(k: f64, p: u32) -> Result<Self> {
        if !(k >= 0.75) || !k.is_finite() {
            return Err(domain("ModelParams::from_k", format!("k = {k} must be ≥ 3/4")));
        }
        let r = 4.0 * k - 2.0;
        Ok(Self {
            b: (r * r - 1.0) / 4.0,
            k,
            p,
            alpha: -2.0 * (k + p as f64),
        })
    }

    pub fn energy(&self, n: usize) -> f64 {
        2.0 * n as f64 + 2.0 * self.k
    }

    /// Ground-state energy `E₀ = 2k`.
    pub fn e0(&self) -> f64 {
        2.0 * self.k
    }

    /// The effective Planck constant `1/(2k)` of the classical phase space.
    pub fn planck(&self) -> f64 {
        0.5 / self.k
    }

    /// `2k + p`, which recurs throughout the transformed formulas.
    pub(crate) fn kp(&self) -> f64 {
        2.0 * self.k + self.p as f64
    }

    /// Exponent `2k − 1/2` of the small-`x` power law.
    pub(crate) fn m(&self) -> f64 {
        2.0 * self.k - 0.5
    }
}

pub fn energy(params: &ModelParams, n: usize) -> f64 {
    params.energy(n)
}

/// Value of the su(1,1) Casimir, `3/16 − b/4`, which equals `k(1 − k)`.
pub fn casimir_value(params: &ModelParams) -> f64 {
    let c = 3.0 / 16.0 - params.b / 4.0;
    debug_assert!((c - params.k * (1.0 - params.k)).abs() <= 1e-14 * c.abs().max(1.0));
    c
}

/// The initial potential `x²/4 + b/x²`.
pub fn potential(params: &ModelParams, x: f64) -> f64 {
    x * x / 4.0 + params.b / (x * x)
}

/// Quadrature nodes and weights for integrals over `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Set for equally spaced grids, which [`apply_h0`] requires.
    pub step: Option<f64>,
}

impl RadialGrid {
    /// Composite Gauss–Legendre over `(0, x_max]`.
    pub fn gauss_legendre(x_max: f64, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if !(x_max > 0.0) || panels == 0 || nodes_per_panel == 0 {
            return Err(Error::Usage(format!(
                "radial grid needs x_max > 0 and nonzero panels (got {x_max}, {panels}, {nodes_per_panel})"
            )));
        }
        let rule = GaussRule::legendre(nodes_per_panel);
        let width = x_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Self {
            nodes,
            weights,
            step: None,
        })
    }

    /// The reference grid for states up to index `n_top`: `total_nodes`
    /// Gauss–Legendre nodes (20 per panel) over `(0, 2√(2E_{n_top}) + 10]`.
    pub fn reference(params: &ModelParams, n_top: usize, total_nodes: usize) -> Result<Self> {
        const PER_PANEL: usize = 20;
        if total_nodes < PER_PANEL {
            return Err(Error::Usage(format!(
                "reference grid needs at least {PER_PANEL} nodes, got {total_nodes}"
            )));
        }
        Self::gauss_legendre(
            Self::reference_extent(params, n_top),
            total_nodes / PER_PANEL,
            PER_PANEL,
        )
    }

    pub fn reference_extent(params: &ModelParams, n_top: usize) -> f64 {
        2.0 * (2.0 * params.energy(n_top)).sqrt() + 10.0
    }

    /// Gauss–Legendre grid wide enough for the coherent state at `z`, whose
    /// envelope decays like `exp(−Re β x²/4)` with `β = (1+z)/(1−z)`.
    pub fn coherent(params: &ModelParams, z: Complex64, total_nodes: usize) -> Result<Self> {
        const PER_PANEL: usize = 20;
        check_disk("RadialGrid::coherent", z)?;
        let one = Complex64::new(1.0, 0.0);
        let re_beta = ((one + z) / (one - z)).re;
        let extent = (400.0 / re_beta).sqrt() + 2.0 * params.m().sqrt() + 5.0;
        Self::gauss_legendre(extent, (total_nodes / PER_PANEL).max(1), PER_PANEL)
    }

    /// `count` equally spaced nodes `h, 2h, …, x_max`. Weights are the
    /// trapezoid rule for functions vanishing at the origin.
    pub fn uniform(x_max: f64, count: usize) -> Result<Self> {
        if !(x_max > 0.0) || count == 0 {
            return Err(Error::Usage(format!(
                "uniform grid needs x_max > 0 and count > 0 (got {x_max}, {count})"
            )));
        }
        let h = x_max / count as f64;
        let nodes: Vec<f64> = (1..=count).map(|i| i as f64 * h).collect();
        let mut weights = vec![h; count];
        weights[count - 1] = 0.5 * h;
        Ok(Self {
            nodes,
            weights,
            step: Some(h),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn x_max(&self) -> f64 {
        self.nodes.last().copied().unwrap_or(0.0)
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate<T: numerics::Scalar>(&self, f: impl Fn(f64) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + f(x) * w)
    }

    /// `Σ wᵢ aᵢ bᵢ` for real samples on this grid.
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (x, y))| w * x * y)
            .sum()
    }

    /// `Σ wᵢ conj(aᵢ) bᵢ`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        self.weights
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (x, y))| x.conj() * y * *w)
            .sum()
    }

    pub fn sample<T>(&self, f: impl Fn(f64) -> T) -> Vec<T> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}

/// Wavefunction samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<'g> {
    pub grid: &'g RadialGrid,
    pub values: Vec<Complex64>,
}

impl<'g> StateVector<'g> {
    pub fn from_fn(grid: &'g RadialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            values: grid.sample(f),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.grid.inner(&self.values, &self.values).re
    }
}

fn check_x(op: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("x = {x} must be positive")))
    }
}

/// `ln` of the normalization `[n! 2^{1−2k}/Γ(n+2k)]^{1/2}`.
fn log_norm(params: &ModelParams, n: usize) -> Result<f64> {
    let k = params.k;
    Ok(0.5
        * (log_gamma(n as f64 + 1.0)? + (1.0 - 2.0 * k) * std::f64::consts::LN_2
            - log_gamma(n as f64 + 2.0 * k)?))
}

/// `x^{2k−1/2} e^{−x²/4}`.
fn envelope(params: &ModelParams, x: f64) -> f64 {
    (params.m() * x.ln() - 0.25 * x * x).exp()
}

/// Value, first and second derivative of `ψₙ` at `x`.
fn psi_jet(params: &ModelParams, n: usize, x: f64) -> Result<[f64; 3]> {
    check_x("psi", x)?;
    let a = 2.0 * params.k - 1.0;
    let m = params.m();
    let y = 0.5 * x * x;
    let n = n as i64;
    let lag = laguerre(n, a, y);
    // d/dy L_n^a = −L_{n−1}^{a+1}, d²/dy² L_n^a = L_{n−2}^{a+2}
    let ly = -laguerre(n - 1, a + 1.0, y);
    let lyy = laguerre(n - 2, a + 2.0, y);
    let c = log_norm(params, n as usize)?.exp() * envelope(params, x);
    let q = m / x - 0.5 * x;
    let value = c * lag;
    let first = c * (q * lag + x * ly);
    let second = c * ((q * q - m / (x * x) - 0.5) * lag + 2.0 * q * x * ly + ly + x * x * lyy);
    Ok([value, first, second])
}

/// Normalized eigenfunction `ψₙ(x)` with eigenvalue `2n + 2k`.
pub fn psi(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    Ok(psi_jet(params, n, x)?[0])
}

/// Analytic `ψₙ′(x)`.
pub fn psi_prime(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    Ok(psi_jet(params, n, x)?[1])
}

/// Analytic `ψₙ″(x)`, from Laguerre derivative identities rather than the ODE.
pub fn psi_second(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    Ok(psi_jet(params, n, x)?[2])
}

/// `ψ₀(x) ..= ψ_{n_max}(x)` from a single Laguerre table.
pub fn psi_all(params: &ModelParams, n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_x("psi_all", x)?;
    let table = laguerre_all(n_max, 2.0 * params.k - 1.0, 0.5 * x * x)?;
    let env = envelope(params, x);
    let mut log_c = log_norm(params, 0)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            // C_n / C_{n−1} = √(n/(n−1+2k))
            log_c += 0.5 * ((n as f64).ln() - (n as f64 - 1.0 + 2.0 * params.k).ln());
        }
        out.push(log_c.exp() * env * table.values[n]);
    }
    Ok(out)
}

/// Applies `h₀` to samples on an equally spaced grid: five-point central
/// stencil inside, one-sided five-point windows at the two ends on each side.
pub fn apply_h0<'g>(params: &ModelParams, state: &StateVector<'g>) -> Result<StateVector<'g>> {
    let grid = state.grid;
    let h = grid
        .step
        .ok_or_else(|| Error::Usage("apply_h0 needs an equally spaced grid".into()))?;
    let v = &state.values;
    let n = v.len();
    if n < 5 {
        return Err(Error::Usage(format!("apply_h0 needs at least 5 nodes, got {n}")));
    }
    let window = |i: usize| [v[i], v[i + 1], v[i + 2], v[i + 3], v[i + 4]];
    let reversed = |i: usize| [v[i + 4], v[i + 3], v[i + 2], v[i + 1], v[i]];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d2 = match i {
            0 => stencil::stencil_d2_forward(window(0), h),
            1 => stencil::stencil_d2_skewed(window(0), h),
            _ if i == n - 1 => stencil::stencil_d2_forward(reversed(n - 5), h),
            _ if i == n - 2 => stencil::stencil_d2_skewed(reversed(n - 5), h),
            _ => stencil::stencil_d2(window(i - 2), h),
        };
        out.push(-d2 + v[i] * potential(params, grid.nodes[i]));
    }
    Ok(StateVector {
        grid,
        values: out,
    })
}

/// Largest `|−ψₙ″ + V₀ψₙ − Eₙψₙ|` over `nodes`, with `ψₙ″` from a local
/// five-point stencil of the closed form.
pub fn eigen_residual(params: &ModelParams, n: usize, nodes: &[f64]) -> Result<f64> {
    let e = params.energy(n);
    let mut worst: f64 = 0.0;
    for &x in nodes {
        let h = radial_step(x);
        let w = try_window(|t| psi(params, n, t), x, h)?;
        let r = -stencil::stencil_d2(w, h) + (potential(params, x) - e) * w[2];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Gram matrix `⟨ψ_m|ψₙ⟩` for `m, n ≤ n_max` on `grid`.
pub fn gram_matrix(params: &ModelParams, n_max: usize, grid: &RadialGrid) -> Result<Vec<Vec<f64>>> {
    let samples: Vec<Vec<f64>> = grid
        .nodes
        .iter()
        .map(|&x| psi_all(params, n_max, x))
        .collect::<Result<_>>()?;
    let column = |n: usize| samples.iter().map(|row| row[n]).collect::<Vec<_>>();
    let cols: Vec<Vec<f64>> = (0..=n_max).map(column).collect();
    Ok((0..=n_max)
        .map(|m| (0..=n_max).map(|n| grid.dot(&cols[m], &cols[n])).collect())
        .collect())
}

/// The coefficient `aₙ = (−1)ⁿ √(Γ(2k+n)/(n! Γ(2k)))`.
pub fn coherent_coeff(params: &ModelParams, n: usize) -> Result<f64> {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * log_coherent_coeff(params, n)?.exp())
}

/// `ln |aₙ|`.
pub(crate) fn log_coherent_coeff(params: &ModelParams, n: usize) -> Result<f64> {
    let two_k = 2.0 * params.k;
    Ok(0.5 * (log_gamma(two_k + n as f64)? - log_gamma(n as f64 + 1.0)? - log_gamma(two_k)?))
}

/// `N₀z = (1 − |z|²)^k`.
pub fn n0z(params: &ModelParams, s: f64) -> f64 {
    (1.0 - s).powf(params.k)
}

pub(crate) fn check_disk(op: &'static str, z: Complex64) -> Result<f64> {
    let s = z.norm_sqr();
    if s < 1.0 {
        Ok(s)
    } else {
        Err(domain(op, format!("|z| = {} must be < 1", s.sqrt())))
    }
}

/// Closed-form coherent state `ψ_z(x)` and its `x`-derivative.
pub fn coherent_psi_jet(params: &ModelParams, z: Complex64, x: f64) -> Result<[Complex64; 2]> {
    let s = check_disk("coherent_psi", z)?;
    check_x("coherent_psi", x)?;
    let k = params.k;
    let one = Complex64::new(1.0, 0.0);
    let beta = (one + z) / (one - z);
    let prefactor = (0.5 - k) * std::f64::consts::LN_2 - 0.5 * log_gamma(2.0 * k)?
        + k * (1.0 - s).ln()
        + params.m() * x.ln();
    let value = (one - z).powf(-2.0 * k) * (Complex64::from(prefactor) - beta * (0.25 * x * x)).exp();
    let first = value * (Complex64::from(params.m() / x) - beta * (0.5 * x));
    Ok([value, first])
}

pub fn coherent_psi(params: &ModelParams, z: Complex64, x: f64) -> Result<Complex64> {
    Ok(coherent_psi_jet(params, z, x)?[0])
}

/// Smallest order `N` with `|aₙ zⁿ|` negligible, per the crate truncation rule.
pub fn coherent_truncation(params: &ModelParams, r: f64) -> Result<usize> {
    let log_r = r.ln();
    truncation_order(
        "coherent series",
        |n| {
            log_coherent_coeff(params, n)
                .map(|l| (l + n as f64 * log_r).exp())
                .unwrap_or(f64::NAN)
        },
        numerics::tol::TRUNCATION,
        numerics::tol::TRUNCATION_CAP,
    )
}

/// `N₀z Σ |aₙ| zⁿ ψₙ(x)`, which must reproduce [`coherent_psi`].
pub fn coherent_psi_series(params: &ModelParams, z: Complex64, x: f64) -> Result<Complex64> {
    let s = check_disk("coherent_psi_series", z)?;
    let n_max = coherent_truncation(params, s.sqrt())?;
    let psis = psi_all(params, n_max, x)?;
    let mut zn = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, psi_n) in psis.iter().enumerate() {
        sum += zn * (log_coherent_coeff(params, n)?.exp() * psi_n);
        zn *= z;
    }
    Ok(sum * n0z(params, s))
}

/// Density `(2k−1)/π (1−s)^{−2}` of the resolving measure against the area element.
pub fn measure_mu_weight(params: &ModelParams, s: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return Err(domain("measure_mu_weight", format!("s = {s} must lie in [0, 1)")));
    }
    Ok((2.0 * params.k - 1.0) / std::f64::consts::PI / ((1.0 - s) * (1.0 - s)))
}

/// Radial exponent that makes the initial resolution integrand smooth.
pub fn initial_rim_exponent(params: &ModelParams) -> f64 {
    2.0 * params.k - 2.0
}

/// `⟨m| ∫ |z⟩⟨z| dμ |n⟩`, integrated over the disk and self-checked against
/// a refined rule.
pub fn resolution_element(
    params: &ModelParams,
    m: usize,
    n: usize,
    quad: &DiskQuadrature,
    tol: f64,
) -> Result<QuadratureResult<Complex64>> {
    let gamma = quad.rim_exponent;
    let am = coherent_coeff(params, m)?;
    let an = coherent_coeff(params, n)?;
    disk_integrate(
        |z| {
            let s = z.norm_sqr();
            let weight = measure_mu_weight(params, s).unwrap_or(f64::NAN) * (1.0 - s).powf(2.0 * params.k - gamma);
            // ⟨m|z⟩ = N₀z a_m z^m, ⟨z|n⟩ = N₀z a_n z̄^n
            z.powu(m as u32) * z.conj().powu(n as u32) * (am * an * weight)
        },
        quad,
        tol,
    )
}

/// Disk rule able to resolve index pairs up to `n_max` exactly in angle.
pub fn resolution_quadrature(rim_exponent: f64, n_max: usize) -> Result<DiskQuadrature> {
    DiskQuadrature::new(rim_exponent, n_max + 8, (2 * n_max + 2).max(64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(b: f64) -> ModelParams {
        make_params(b, 0).unwrap()
    }

    #[test]
    fn make_params_examples() {
        let p = make_params(0.0, 0).unwrap();
        assert_eq!((p.k, p.alpha), (0.75, -1.5));
        let p = make_params(2.0, 1).unwrap();
        assert_eq!((p.k, p.alpha), (1.25, -4.5));
        let p = make_params(6.0, 0).unwrap();
        assert_eq!((p.k, p.alpha), (1.75, -3.5));
        assert!(make_params(-1.0, 0).is_err());
        assert!(make_params(f64::NAN, 0).is_err());
    }

    #[test]
    fn from_k_recovers_b() {
        let p = make_params(2.0, 1).unwrap();
        let q = ModelParams::from_k(p.k, 1).unwrap();
        assert_relative_eq!(q.b, 2.0, max_relative = 1e-15);
        assert!(ModelParams::from_k(0.7, 0).is_err());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(params(2.0).energy(0), 2.5);
        assert_eq!(params(0.0).energy(3), 7.5);
        assert_eq!(params(6.0).energy(10), 23.5);
        assert_eq!(params(2.0).planck(), 0.4);
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir_value(&params(0.0)), 3.0 / 16.0);
        assert_eq!(casimir_value(&params(2.0)), -5.0 / 16.0);
        assert_eq!(casimir_value(&params(6.0)), -21.0 / 16.0);
    }

    #[test]
    fn ground_state_shape() {
        // b = 2: 2k − 1/2 = 2 and L₀ = 1
        let p = params(2.0);
        let c = psi(&p, 0, 1.0).unwrap() / (-0.25f64).exp();
        for &x in &[0.3, 1.7, 4.0] {
            assert_relative_eq!(psi(&p, 0, x).unwrap(), c * x * x * (-x * x / 4.0).exp(), max_relative = 1e-14);
        }
        assert!(psi(&p, 0, 0.0).is_err());
        assert!(psi(&p, 0, -1.0).is_err());
    }

    #[test]
    fn derivative_against_finite_difference() {
        let p = params(2.0);
        let h = 1e-3;
        let fd = (psi(&p, 0, 1.0 - 2.0 * h).unwrap() - 8.0 * psi(&p, 0, 1.0 - h).unwrap()
            + 8.0 * psi(&p, 0, 1.0 + h).unwrap()
            - psi(&p, 0, 1.0 + 2.0 * h).unwrap())
            / (12.0 * h);
        assert!((psi_prime(&p, 0, 1.0).unwrap() - fd).abs() < 1e-8);
        for &x in &[0.2, 1.0, 3.5] {
            let log_d = psi_prime(&p, 0, x).unwrap() / psi(&p, 0, x).unwrap();
            assert_relative_eq!(log_d, p.m() / x - x / 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn second_derivative_satisfies_the_equation() {
        for &b in &[0.0, 0.5, 2.0, 6.0] {
            let p = params(b);
            for n in 0..12 {
                for &x in &[0.05, 0.9, 3.3, 7.0] {
                    let [v, _, d2] = psi_jet(&p, n, x).unwrap();
                    let r = -d2 + (potential(&p, x) - p.energy(n)) * v;
                    assert!(r.abs() < 1e-11 * (1.0 + potential(&p, x)), "b={b} n={n} x={x}: {r}");
                }
            }
        }
    }

    #[test]
    fn psi_all_matches_single_evaluations() {
        let p = params(0.5);
        let all = psi_all(&p, 15, 2.3).unwrap();
        for (n, v) in all.iter().enumerate() {
            assert_relative_eq!(*v, psi(&p, n, 2.3).unwrap(), max_relative = 1e-12, epsilon = 1e-300);
        }
    }

    #[test]
    fn orthonormality_by_quadrature() {
        for &b in &[0.0, 0.5, 2.0, 6.0] {
            let p = params(b);
            let grid = RadialGrid::reference(&p, 15, 2000).unwrap();
            let g = gram_matrix(&p, 15, &grid).unwrap();
            for (m, row) in g.iter().enumerate() {
                for (n, v) in row.iter().enumerate() {
                    let target = if m == n { 1.0 } else { 0.0 };
                    assert!((v - target).abs() < 1e-8, "b={b} ({m},{n}): {v}");
                }
            }
        }
    }

    #[test]
    fn reference_grid_integrates_gaussian() {
        let grid = RadialGrid::reference(&params(2.0), 10, 2000).unwrap();
        let v: f64 = grid.integrate(|x| (-x * x / 4.0).exp());
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn eigen_residual_on_reference_nodes() {
        for &b in &[0.0, 0.5, 2.0, 6.0] {
            let p = params(b);
            let grid = RadialGrid::reference(&p, 10, 2000).unwrap();
            for n in 0..=10 {
                let r = eigen_residual(&p, n, &grid.nodes).unwrap();
                assert!(r < 1e-6, "b={b} n={n}: {r}");
            }
        }
    }

    #[test]
    fn apply_h0_on_uniform_grid() {
        let p = params(2.0);
        let grid = RadialGrid::uniform(20.0, 2000).unwrap();
        for n in 0..=5 {
            let state = StateVector::from_fn(&grid, |x| psi(&p, n, x).unwrap().into());
            let out = apply_h0(&p, &state).unwrap();
            let e = p.energy(n);
            let interior = 2..grid.len() - 2;
            let worst = interior
                .map(|i| (out.values[i] - state.values[i] * e).norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "n={n}: {worst}");
        }
    }

    #[test]
    fn apply_h0_zero_and_linearity() {
        let p = params(2.0);
        let grid = RadialGrid::uniform(10.0, 200).unwrap();
        let zero = StateVector::from_fn(&grid, |_| Complex64::new(0.0, 0.0));
        assert!(apply_h0(&p, &zero).unwrap().values.iter().all(|v| *v == Complex64::new(0.0, 0.0)));

        let f = StateVector::from_fn(&grid, |x| Complex64::new((-x).exp() * x, 0.0));
        let g = StateVector::from_fn(&grid, |x| Complex64::new(0.0, x.sin() * x * x));
        let (a, c) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let combo = StateVector {
            grid: &grid,
            values: f.values.iter().zip(&g.values).map(|(u, v)| a * u + c * v).collect(),
        };
        let lhs = apply_h0(&p, &combo).unwrap();
        let (hf, hg) = (apply_h0(&p, &f).unwrap(), apply_h0(&p, &g).unwrap());
        for i in 0..grid.len() {
            let rhs = a * hf.values[i] + c * hg.values[i];
            assert!((lhs.values[i] - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
        let tiny = RadialGrid::uniform(1.0, 4).unwrap();
        let s = StateVector::from_fn(&tiny, |x| x.into());
        assert!(matches!(apply_h0(&p, &s), Err(Error::Usage(_))));
    }

    #[test]
    fn coherent_coefficients() {
        let p = params(2.0);
        assert_eq!(coherent_coeff(&p, 0).unwrap(), 1.0);
        assert_relative_eq!(coherent_coeff(&p, 1).unwrap(), -(2.0 * p.k).sqrt(), max_relative = 1e-14);
        let product: f64 = (0..5).map(|j| (2.0 * p.k + j as f64) / (j as f64 + 1.0)).product();
        assert_relative_eq!(coherent_coeff(&p, 5).unwrap(), -product.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn coherent_state_vacuum_and_series() {
        let p = params(2.0);
        for &x in &[0.4, 1.3, 5.0] {
            let v = coherent_psi(&p, Complex64::new(0.0, 0.0), x).unwrap();
            assert_relative_eq!(v.re, psi(&p, 0, x).unwrap(), max_relative = 1e-13);
            assert_eq!(v.im, 0.0);
        }
        for &z in &[Complex64::new(0.6, 0.0), Complex64::new(-0.3, 0.5), Complex64::new(0.1, -0.85)] {
            let closed = coherent_psi(&p, z, 1.3).unwrap();
            let series = coherent_psi_series(&p, z, 1.3).unwrap();
            assert!((closed - series).norm() < 1e-8, "z={z}: {closed} vs {series}");
        }
        assert!(coherent_psi(&p, Complex64::new(1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn coherent_state_is_normalized() {
        let p = params(2.0);
        let grid = RadialGrid::reference(&p, 40, 4000).unwrap();
        for &z in &[Complex64::new(0.5, 0.2), Complex64::new(-0.7, 0.1), Complex64::new(0.0, 0.9)] {
            let v = grid.sample(|x| coherent_psi(&p, z, x).unwrap());
            let norm = grid.inner(&v, &v).re;
            assert!((norm - 1.0).abs() < 1e-8, "z={z}: {norm}");
        }
    }

    #[test]
    fn measure_weight_examples() {
        let p = params(0.0);
        assert_relative_eq!(measure_mu_weight(&p, 0.0).unwrap(), 0.5 / std::f64::consts::PI);
        assert!(measure_mu_weight(&p, 1.0).is_err());
        assert!(measure_mu_weight(&p, -0.1).is_err());
    }

    #[test]
    fn resolution_of_identity() {
        for &b in &[0.0, 2.0] {
            let p = params(b);
            let quad = resolution_quadrature(initial_rim_exponent(&p), 8).unwrap();
            for m in 0..=8 {
                for n in 0..=8 {
                    let r = resolution_element(&p, m, n, &quad, 1e-10).unwrap();
                    let target = if m == n { 1.0 } else { 0.0 };
                    assert!((r.value - target).norm() < 1e-6, "b={b} ({m},{n}): {}", r.value);
                }
            }
        }
    }
}
