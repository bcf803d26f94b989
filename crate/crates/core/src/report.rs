//! Verification report: every identity of the library evaluated at one
//! parameter point, with measured residuals, tolerances and verdicts.
//!
//! Residuals are absolute unless the check says otherwise; "scaled" means
//! `|a − b| / max(1, |b|)`. Serialization is deterministic: fixed field
//! order, floats printed with 17 significant digits, non-finite values as
//! `null`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::darboux::{self, DarbouxContext, Eigenstate, Superposition};
use crate::error::{Error, Result};
use crate::geometry::{self, disk_sample, poisson, Coordinate, Observable, Symbol, SymbolKind};
use crate::holomorphic::{self as holo, HoloSeries, InitialOp, TransformedOp};
use crate::numerics::tol;
use crate::oscillator::{self, make_params, ModelParams, RadialGrid};
use crate::specfun::laguerre_all;
use crate::transformed_coherent::{self as tc, BetaIndex, OverlapSign};
use crate::System;

/// Inputs of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub b: f64,
    pub p: u32,
    /// Highest eigenstate index in the half-line checks.
    pub n_max: usize,
    /// Total nodes of the reference half-line grid.
    pub grid_nodes: usize,
    /// Override for checks whose default tolerance is at least `1e-7`.
    pub tol_coarse: Option<f64>,
    /// Override for checks whose default tolerance is below `1e-7`.
    pub tol_fine: Option<f64>,
    /// Initial point of the classical flows.
    pub z0: Complex64,
    pub t_end: f64,
    pub dt: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            b: 2.0,
            p: 1,
            n_max: 10,
            grid_nodes: 2000,
            tol_coarse: None,
            tol_fine: None,
            z0: Complex64::new(0.5, 0.0),
            t_end: 4.0 * std::f64::consts::PI,
            dt: 1e-3,
        }
    }
}

/// Default tolerances at or above this value count as coarse.
pub const COARSE_THRESHOLD: f64 = 1e-7;

impl VerifyConfig {
    /// Rejects inputs no check could run with.
    pub fn validate(&self) -> Result<()> {
        make_params(self.b, self.p)?;
        if self.n_max == 0 || self.n_max > 60 {
            return Err(Error::Usage(format!("n_max = {} must lie in 1..=60", self.n_max)));
        }
        if self.grid_nodes < 200 {
            return Err(Error::Usage(format!("grid_nodes = {} must be at least 200", self.grid_nodes)));
        }
        for (name, t) in [("tol_coarse", self.tol_coarse), ("tol_fine", self.tol_fine)] {
            if let Some(t) = t {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::Usage(format!("{name} = {t} must be positive")));
                }
            }
        }
        if !(self.z0.norm() < 1.0) {
            return Err(Error::Usage(format!("z0 = {} must lie inside the unit disk", self.z0)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite() && self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Usage(format!(
                "need dt > 0 and t_end ≥ 0 (got dt = {}, t_end = {})",
                self.dt, self.t_end
            )));
        }
        Ok(())
    }

    /// Tolerance applied to a check with the given default.
    pub fn tolerance_for(&self, default: f64) -> f64 {
        let over = if default >= COARSE_THRESHOLD { self.tol_coarse } else { self.tol_fine };
        over.unwrap_or(default)
    }
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        let raw = RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    } else {
        s.serialize_none()
    }
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    struct F(f64);
    impl Serialize for F {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            ser_f64(&self.0, s)
        }
    }
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&F(z.re))?;
    t.serialize_element(&F(z.im))?;
    t.end()
}

/// One verified identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub group: &'static str,
    /// Short statement of the identity.
    pub identity: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tolerance: f64,
    pub passed: bool,
    /// Residual at the base resolution, for self-converged quadratures.
    #[serde(serialize_with = "ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub coarse: Option<f64>,
    /// Residual at the refined resolution.
    #[serde(serialize_with = "ser_opt_f64", skip_serializing_if = "Option::is_none")]
    pub refined: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A measured quantity recorded without entering the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub name: &'static str,
    pub description: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub threshold: Option<f64>,
    /// `"PASS"`/`"FAIL"` against the threshold, if one applies.
    pub outcome: Option<&'static str>,
}

/// Convention choices, always recorded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conventions {
    pub measure: &'static str,
    pub l0_sign: &'static str,
    pub beta_index: &'static str,
    pub bracket_sign: &'static str,
    pub basis_phase: &'static str,
    pub overlap_numerator: &'static str,
    pub raising_symbol: &'static str,
    pub holomorphic_raising: &'static str,
    pub flow_hamiltonian: &'static str,
    pub transformed_holomorphic_basis: &'static str,
    pub tolerance_overrides: &'static str,
}

impl Conventions {
    fn chosen() -> Self {
        Self {
            measure: "area element d(Re z) d(Im z)",
            l0_sign: "u'/u (printed closed form negated)",
            beta_index: "B(n+j+1, 2k+p-j) (printed B(n+j-1, .) diverges at n=j=0)",
            bracket_sign: "{F,G} = (i/g)(dF/dzbar dG/dz - dF/dz dG/dzbar), {z,K0} = -iz",
            basis_phase: "|n> = (-1)^n psi_n",
            overlap_numerator: "2k+p-p*zeta*z",
            raising_symbol: "P+ proportional to z, middle term 2(p-1)(2k+1)/(1-s)",
            holomorphic_raising: "2z^3 d^2 + 2(4k+p+2) z^2 d + 4k(2k+p+1) z",
            flow_hamiltonian: "K0 (initial), P0 = H1/2 (transformed)",
            transformed_holomorphic_basis: "orthonormal: <z^n|z^m> = delta/b_n^2 under dnu",
            tolerance_overrides: "tol_coarse: defaults >= 1e-7; tol_fine: defaults < 1e-7",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters {
    #[serde(serialize_with = "ser_f64")]
    pub b: f64,
    pub p: u32,
    #[serde(serialize_with = "ser_f64")]
    pub k: f64,
    #[serde(serialize_with = "ser_f64")]
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub n_max: usize,
    pub grid_nodes: usize,
    #[serde(serialize_with = "ser_f64")]
    pub grid_extent: f64,
    pub grid_nodes_per_panel: usize,
    #[serde(serialize_with = "ser_complex")]
    pub z0: Complex64,
    #[serde(serialize_with = "ser_f64")]
    pub t_end: f64,
    #[serde(serialize_with = "ser_f64")]
    pub dt: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub tol_coarse: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub tol_fine: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// The full report of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub parameters: Parameters,
    pub settings: Settings,
    pub conventions: Conventions,
    pub checks: Vec<CheckResult>,
    pub observations: Vec<Observation>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is infallible");
        s.push('\n');
        s
    }
}

/// Measured outcome of one check.
struct Measured {
    residual: f64,
    pair: Option<(f64, f64)>,
}

impl From<f64> for Measured {
    fn from(residual: f64) -> Self {
        Self { residual, pair: None }
    }
}

/// Shared state of a run.
struct Env {
    cfg: VerifyConfig,
    params: ModelParams,
    ctx: DarbouxContext,
    grid: RadialGrid,
    /// Grid nodes with `x ≥ 0.1`, where stencil rounding `~ε/x²` is small.
    inner_nodes: Vec<f64>,
    /// Inner nodes that also lie below [`U_P_LIMIT`].
    u_nodes: Vec<f64>,
}

struct CheckDef {
    name: &'static str,
    group: &'static str,
    identity: &'static str,
    tolerance: f64,
    run: fn(&Env) -> Result<Measured>,
}

const NODES_PER_PANEL: usize = 20;
/// `u_p` grows like `e^{x²/4}`; past this point the relative stencil error
/// of its checks exceeds `1e-7`.
const U_P_LIMIT: f64 = 12.0;

fn scaled(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn scaled_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn relative_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn max_of<I, T>(items: I, f: impl Fn(T) -> Result<f64>) -> Result<f64>
where
    I: IntoIterator<Item = T>,
{
    items.into_iter().try_fold(0.0f64, |acc, t| {
        let v = f(t)?;
        Ok(if v.is_nan() { f64::NAN } else { acc.max(v) })
    })
}

fn identity_defect(matrix: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (m, row) in matrix.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Sample points for quadrature-heavy coherent-state checks.
fn coherent_points() -> Vec<Complex64> {
    disk_sample(4, 0.8)
}

fn small_index(env: &Env) -> usize {
    env.cfg.n_max.min(8)
}

// --- special functions and the initial system ---

fn laguerre_recurrence(env: &Env) -> Result<Measured> {
    let alpha = 2.0 * env.params.k - 1.0;
    max_of([-4.0, 0.5, 2.0, 10.0, 30.0], |x| {
        Ok(laguerre_all(env.cfg.n_max + 2, alpha, x)?.recurrence_residual())
    })
    .map(Into::into)
}

fn casimir(env: &Env) -> Result<Measured> {
    let k = env.params.k;
    Ok(scaled(oscillator::casimir_value(&env.params), k * (1.0 - k)).into())
}

fn psi_orthonormality(env: &Env) -> Result<Measured> {
    Ok(identity_defect(&oscillator::gram_matrix(&env.params, env.cfg.n_max, &env.grid)?).into())
}

fn psi_eigen(env: &Env) -> Result<Measured> {
    max_of(0..=env.cfg.n_max, |n| oscillator::eigen_residual(&env.params, n, &env.grid.nodes)).map(Into::into)
}

fn coherent_nodes(env: &Env, z: Complex64) -> Result<RadialGrid> {
    RadialGrid::coherent(&env.params, z, env.cfg.grid_nodes.max(4000))
}

fn psi_z_normalization(env: &Env) -> Result<Measured> {
    max_of(coherent_points(), |z| {
        let grid = coherent_nodes(env, z)?;
        let norm = grid.nodes.iter().zip(&grid.weights).try_fold(0.0, |acc, (&x, &w)| {
            Ok::<_, Error>(acc + w * oscillator::coherent_psi(&env.params, z, x)?.norm_sqr())
        })?;
        Ok((norm - 1.0).abs())
    })
    .map(Into::into)
}

fn psi_z_series(env: &Env) -> Result<Measured> {
    max_of(coherent_points(), |z| {
        max_of([0.5, 2.0, 5.0], |x| {
            let closed = oscillator::coherent_psi(&env.params, z, x)?;
            Ok(scaled_c(oscillator::coherent_psi_series(&env.params, z, x)?, closed))
        })
    })
    .map(Into::into)
}

fn resolution_mu(env: &Env) -> Result<Measured> {
    let top = small_index(env);
    let quad = oscillator::resolution_quadrature(oscillator::initial_rim_exponent(&env.params), top)?;
    let (mut fine, mut coarse) = (0.0f64, 0.0f64);
    for m in 0..=top {
        for n in 0..=top {
            let r = oscillator::resolution_element(&env.params, m, n, &quad, tol::MOMENT)?;
            let target = if m == n { 1.0 } else { 0.0 };
            fine = fine.max((r.value - target).norm());
            coarse = coarse.max((r.coarse - target).norm());
        }
    }
    Ok(Measured { residual: fine, pair: Some((coarse, fine)) })
}

// --- the Darboux layer ---

fn transformation_function(env: &Env) -> Result<Measured> {
    Ok(darboux::transformation_residual(&env.ctx, &env.u_nodes)?.into())
}

fn l0_consistency(env: &Env) -> Result<Measured> {
    Ok(darboux::l0_consistency(&env.ctx, &env.u_nodes)?.into())
}

fn potential_difference(env: &Env) -> Result<Measured> {
    Ok(darboux::potential_difference_residual(&env.ctx, &env.u_nodes)?.into())
}

fn potential_small_x(env: &Env) -> Result<Measured> {
    let (k, p) = (env.params.k, env.params.p as f64);
    let x = 1e-4;
    let lim = darboux::a_p(&env.ctx, x)? - (4.0 * k - 1.0) / (x * x);
    Ok((lim - (-1.0 - p / k)).abs().into())
}

fn potential_far_field(env: &Env) -> Result<Measured> {
    Ok((darboux::a_p(&env.ctx, 200.0)? + 1.0).abs().into())
}

fn isospectrality(env: &Env) -> Result<Measured> {
    max_of(0..=env.cfg.n_max, |n| darboux::isospectral_residual(&env.ctx, n, &env.grid.nodes)).map(Into::into)
}

fn phi_orthonormality(env: &Env) -> Result<Measured> {
    Ok(identity_defect(&darboux::gram_matrix(&env.ctx, env.cfg.n_max, &env.grid)?).into())
}

fn factorization_initial(env: &Env) -> Result<Measured> {
    max_of(0..=small_index(env), |n| {
        darboux::factorization_residual_initial(&env.ctx, n, &env.grid.nodes)
    })
    .map(Into::into)
}

fn factorization_transformed(env: &Env) -> Result<Measured> {
    max_of(0..=small_index(env), |n| {
        darboux::factorization_residual_transformed(&env.ctx, n, &env.grid.nodes)
    })
    .map(Into::into)
}

fn inverse_map(env: &Env) -> Result<Measured> {
    max_of(0..=env.cfg.n_max, |n| darboux::inverse_residual(&env.ctx, n, &env.grid.nodes)).map(Into::into)
}

fn intertwining(env: &Env) -> Result<Measured> {
    let single = max_of(0..=small_index(env), |n| {
        let s = Eigenstate { params: env.params, n };
        darboux::intertwining_residual(&env.ctx, &s, &env.inner_nodes)
    })?;
    let mix = Superposition(vec![
        (1.0, Eigenstate { params: env.params, n: 0 }),
        (-0.5, Eigenstate { params: env.params, n: 1 }),
        (0.25, Eigenstate { params: env.params, n: 2 }),
    ]);
    Ok(single.max(darboux::intertwining_residual(&env.ctx, &mix, &env.inner_nodes)?).into())
}

fn normalization_constant(env: &Env) -> Result<Measured> {
    max_of(0..=env.cfg.n_max, |n| {
        let q = darboux::normalization_quadrature(&env.ctx, n, &env.grid)?;
        Ok(relative(q, env.ctx.n_inv_sq(n)))
    })
    .map(Into::into)
}

fn commutator(env: &Env) -> Result<Measured> {
    max_of(0..=20, |n| {
        let (lhs, rhs) = darboux::nonlinear_commutator_check(&env.ctx, n);
        Ok(relative(lhs, rhs))
    })
    .map(Into::into)
}

// --- transformed coherent states and their measure ---

fn phi_z_normalization(env: &Env) -> Result<Measured> {
    max_of(coherent_points(), |z| {
        Ok((tc::phi_z_norm_sq(&env.params, z, &coherent_nodes(env, z)?)? - 1.0).abs())
    })
    .map(Into::into)
}

fn phi_z_series(env: &Env) -> Result<Measured> {
    max_of(coherent_points(), |z| {
        max_of([0.5, 2.0, 5.0], |x| {
            let closed = tc::phi_z(&env.params, z, x)?;
            Ok(scaled_c(tc::phi_z_series(&env.params, z, x)?, closed))
        })
    })
    .map(Into::into)
}

fn n1z_factorization(env: &Env) -> Result<Measured> {
    max_of(coherent_points(), |z| {
        let q = tc::n1z_inv_sq_quadrature(&env.params, z, &coherent_nodes(env, z)?)?;
        let n1 = tc::n1z(&env.params, z.norm_sqr())?;
        Ok(relative(q, 1.0 / (n1 * n1)))
    })
    .map(Into::into)
}

fn moment_identity(env: &Env) -> Result<Measured> {
    max_of(0..=20, |n| Ok(relative(tc::moment_lhs(&env.params, n)?, tc::moment_rhs(&env.params, n)?)))
        .map(Into::into)
}

fn beta_sum_identity(env: &Env) -> Result<Measured> {
    max_of(0..=20, |n| {
        Ok(relative(tc::beta_sum(&env.params, n, BetaIndex::Derived)?, tc::moment_rhs(&env.params, n)?))
    })
    .map(Into::into)
}

fn resolution_nu(env: &Env) -> Result<Measured> {
    let top = small_index(env);
    let mut worst = 0.0f64;
    for m in 0..=top {
        for n in 0..=top {
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((tc::resolution_check_transformed(&env.params, m, n)? - target).norm());
        }
    }
    Ok(worst.into())
}

fn overlap_pairs() -> Vec<(Complex64, Complex64)> {
    let pts = disk_sample(6, 0.9);
    pts.iter().flat_map(|&a| pts.iter().map(move |&b| (a, b))).collect()
}

fn overlap_series(env: &Env) -> Result<Measured> {
    max_of(overlap_pairs(), |(zeta, z)| {
        Ok(relative_c(tc::zeta1_series(&env.params, zeta, z)?, tc::zeta1(&env.params, zeta, z)?))
    })
    .map(Into::into)
}

// --- holomorphic representation ---

fn bergman_for(env: &Env, system: System) -> Result<Measured> {
    max_of(overlap_pairs(), |(z, w)| {
        let closed = holo::bergman(system, &env.params, z, w.conj())?;
        Ok(relative_c(holo::bergman_series(system, &env.params, z, w.conj())?, closed))
    })
    .map(Into::into)
}

fn bergman_initial(env: &Env) -> Result<Measured> {
    bergman_for(env, System::Initial)
}

fn bergman_transformed(env: &Env) -> Result<Measured> {
    bergman_for(env, System::Transformed)
}

fn reproducing(env: &Env) -> Result<Measured> {
    let coeffs = vec![c(1.0, 0.0), c(-0.5, 0.2), c(0.0, 1.0), c(0.3, 0.0), c(0.0, 0.0), c(-0.1, -0.4)];
    let (mut fine, mut coarse) = (0.0f64, 0.0f64);
    for system in [System::Initial, System::Transformed] {
        let f = HoloSeries::new(system, env.params, coeffs.clone());
        for z0 in disk_sample(3, 0.6) {
            let kernel = HoloSeries::kernel(system, env.params, z0.conj())?;
            let q = holo::inner_product_holo(&kernel, &f, tol::MOMENT)?;
            let target = f.eval(z0);
            fine = fine.max(scaled_c(q.value, target));
            coarse = coarse.max(scaled_c(q.coarse, target));
        }
    }
    Ok(Measured { residual: fine, pair: Some((coarse, fine)) })
}

fn holo_gram(env: &Env, system: System) -> Result<Measured> {
    let top = small_index(env);
    let basis: Vec<HoloSeries> =
        (0..=top).map(|n| HoloSeries::basis(system, env.params, n)).collect::<Result<_>>()?;
    let (mut fine, mut coarse) = (0.0f64, 0.0f64);
    for (m, a) in basis.iter().enumerate() {
        for (n, b) in basis.iter().enumerate() {
            let q = holo::inner_product_holo(a, b, tol::MOMENT)?;
            let target = if m == n { 1.0 } else { 0.0 };
            fine = fine.max((q.value - target).norm());
            coarse = coarse.max((q.coarse - target).norm());
        }
    }
    Ok(Measured { residual: fine, pair: Some((coarse, fine)) })
}

fn holo_gram_initial(env: &Env) -> Result<Measured> {
    holo_gram(env, System::Initial)
}

fn holo_gram_transformed(env: &Env) -> Result<Measured> {
    holo_gram(env, System::Transformed)
}

fn holo_intertwining(env: &Env) -> Result<Measured> {
    max_of(0..=30, |n| {
        let m = HoloSeries::monomial(System::Initial, env.params, n);
        let lk = holo::apply_op_transformed(TransformedOp::L, &holo::apply_op_initial(InitialOp::K0, &m)?)?;
        let pl = holo::apply_op_transformed(TransformedOp::P0, &holo::apply_op_transformed(TransformedOp::L, &m)?)?;
        Ok(relative_c(lk.coeffs[n], pl.coeffs[n]))
    })
    .map(Into::into)
}

fn holo_factorization(env: &Env) -> Result<Measured> {
    max_of(0..=30, |n| {
        let m = HoloSeries::monomial(System::Transformed, env.params, n);
        let l = holo::apply_op_transformed(TransformedOp::L, &m)?;
        let ldl = holo::apply_op_transformed(TransformedOp::LDag, &l)?;
        Ok(relative(ldl.coeffs[n].re, env.ctx.n_inv_sq(n)))
    })
    .map(Into::into)
}

/// `[p₋, p₊]` on `zⁿ` in the holomorphic representation, with the chosen raising map.
fn holo_commutator_value(params: ModelParams, n: usize, raise: TransformedOp) -> Result<f64> {
    let m = HoloSeries::monomial(System::Transformed, params, n);
    let up = holo::apply_op_transformed(raise, &m)?;
    let a = holo::apply_op_transformed(TransformedOp::PMinus, &up)?.coeffs[n];
    let down = holo::apply_op_transformed(TransformedOp::PMinus, &m)?;
    let b = holo::apply_op_transformed(raise, &down)?.coeffs.get(n).copied().unwrap_or_default();
    Ok((a - b).re)
}

fn holo_commutator(env: &Env) -> Result<Measured> {
    max_of(0..=20, |n| {
        let (lhs, _) = darboux::nonlinear_commutator_check(&env.ctx, n);
        Ok(relative(holo_commutator_value(env.params, n, TransformedOp::PPlus)?, lhs))
    })
    .map(Into::into)
}

// --- phase-space geometry ---

fn metric_points() -> impl Iterator<Item = f64> {
    (0..100).map(|i| i as f64 * 0.01)
}

fn metric_initial(env: &Env) -> Result<Measured> {
    max_of(metric_points(), |s| geometry::metric_from_potential_residual(&env.params, System::Initial, s))
        .map(Into::into)
}

fn metric_transformed(env: &Env) -> Result<Measured> {
    max_of(metric_points(), |s| geometry::metric_from_potential_residual(&env.params, System::Transformed, s))
        .map(Into::into)
}

fn potential_from_quadrature(env: &Env) -> Result<Measured> {
    max_of(coherent_points(), |z| {
        let q = geometry::f1_quadrature(&env.params, z, &coherent_nodes(env, z)?)?;
        Ok(scaled(q, geometry::f1(&env.params, z.norm_sqr())?))
    })
    .map(Into::into)
}

fn curvature_initial(env: &Env) -> Result<Measured> {
    let target = -2.0 / env.params.k;
    let mut pts = disk_sample(20, 0.95);
    pts.push(c(0.0, 0.0));
    max_of(pts, |z| Ok((geometry::curvature(&env.params, System::Initial, z)? - target).abs())).map(Into::into)
}

fn curvature_p0(env: &Env) -> Result<Measured> {
    let p0 = make_params(env.params.b, 0)?;
    let target = -2.0 / (p0.k + 0.5);
    max_of(disk_sample(20, 0.95), |z| Ok((geometry::curvature(&p0, System::Transformed, z)? - target).abs()))
        .map(Into::into)
}

fn curvature_large_k(env: &Env) -> Result<Measured> {
    let big = make_params(1e4, env.params.p)?;
    max_of([c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.6)], |z| {
        Ok(geometry::curvature(&big, System::Transformed, z)?.abs())
    })
    .map(Into::into)
}

fn symbols_by_quadrature(env: &Env) -> Result<Measured> {
    max_of(coherent_points().into_iter().take(2), |z| {
        let grid = coherent_nodes(env, z)?;
        max_of([SymbolKind::K0, SymbolKind::H1], |kind| {
            let q = geometry::symbol_quadrature(&env.params, kind, z, &grid)?;
            Ok(scaled(q, geometry::symbol(&env.params, kind, z)?.re))
        })
    })
    .map(Into::into)
}

fn symbols_by_series(env: &Env) -> Result<Measured> {
    max_of(disk_sample(8, 0.9), |z| {
        max_of([SymbolKind::H1, SymbolKind::PPlus, SymbolKind::PMinus], |kind| {
            Ok(relative_c(
                geometry::symbol_series(&env.params, kind, z)?,
                geometry::symbol(&env.params, kind, z)?,
            ))
        })
    })
    .map(Into::into)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn bracket_relations(env: &Env) -> Result<Measured> {
    let p = env.params;
    let sym = |k| Symbol::new(p, k);
    max_of(disk_sample(20, 0.9), |z| {
        let mut worst = scaled_c(poisson(&p, System::Initial, &Coordinate::Z, &sym(SymbolKind::K0), z)?, -I * z);
        let k0 = sym(SymbolKind::K0);
        let target = 2.0 * I * k0.value(z)?;
        worst = worst.max(scaled_c(
            poisson(&p, System::Initial, &sym(SymbolKind::KMinus), &sym(SymbolKind::KPlus), z)?,
            target,
        ));
        for (kind, sign) in [(SymbolKind::KPlus, 1.0), (SymbolKind::KMinus, -1.0)] {
            let v = poisson(&p, System::Initial, &k0, &sym(kind), z)?;
            worst = worst.max(scaled_c(v, I * sign * sym(kind).value(z)?));
        }
        let p0 = sym(SymbolKind::P0);
        for (kind, sign) in [(SymbolKind::PPlus, 1.0), (SymbolKind::PMinus, -1.0)] {
            let v = poisson(&p, System::Transformed, &p0, &sym(kind), z)?;
            worst = worst.max(scaled_c(v, I * sign * sym(kind).value(z)?));
        }
        Ok(worst)
    })
    .map(Into::into)
}

fn flows(env: &Env) -> Result<(geometry::Trajectory, geometry::Trajectory)> {
    let (z0, t, dt) = (env.cfg.z0, env.cfg.t_end, env.cfg.dt);
    Ok((
        geometry::hamilton_flow(&env.params, System::Initial, z0, t, dt)?,
        geometry::hamilton_flow(&env.params, System::Transformed, z0, t, dt)?,
    ))
}

fn flow_coincidence(env: &Env) -> Result<Measured> {
    let (a, b) = flows(env)?;
    max_of(a.states.iter().zip(&b.states), |(x, y)| Ok((x.z - y.z).norm())).map(Into::into)
}

fn flow_modulus(env: &Env) -> Result<Measured> {
    let (a, b) = flows(env)?;
    Ok(a.modulus_drift().max(b.modulus_drift()).into())
}

fn flow_energy(env: &Env) -> Result<Measured> {
    let (a, b) = flows(env)?;
    Ok(a.energy_drift(&env.params)?.max(b.energy_drift(&env.params)?).into())
}

fn flow_period(env: &Env) -> Result<Measured> {
    let z0 = env.cfg.z0;
    let tau = 2.0 * std::f64::consts::PI;
    max_of([System::Initial, System::Transformed], |system| {
        Ok((geometry::hamilton_flow(&env.params, system, z0, tau, env.cfg.dt)?.last().z - z0).norm())
    })
    .map(Into::into)
}

fn p0_reductions(env: &Env) -> Result<Measured> {
    let p0 = make_params(env.params.b, 0)?;
    let shifted = ModelParams::from_k(p0.k + 0.5, 0)?;
    let mut worst = 0.0f64;
    for s in [0.05, 0.1, 0.35, 0.6, 0.9] {
        let h = tc::measure_h(&p0, s)?;
        worst = worst.max(scaled(h, oscillator::measure_mu_weight(&shifted, s)?));
        worst = worst.max(scaled(geometry::g1(&p0, s)?, geometry::g0(&shifted, s)?));
        worst = worst.max(scaled(geometry::f1(&p0, s)?, geometry::f0(&shifted, s)?));
    }
    for (zeta, z) in overlap_pairs() {
        worst = worst.max(scaled_c(tc::zeta1(&p0, zeta, z)?, holo::coherent_overlap_initial(&shifted, zeta, z)?));
        worst = worst.max(scaled_c(holo::bergman1(&p0, z, zeta)?, holo::bergman0(&shifted, z, zeta)?));
    }
    for z in disk_sample(6, 0.9) {
        let a = geometry::curvature(&p0, System::Transformed, z)?;
        let b = geometry::curvature(&shifted, System::Initial, z)?;
        worst = worst.max(scaled(a, b));
    }
    Ok(worst.into())
}

const REGISTRY: &[CheckDef] = &[
    CheckDef {
        name: "laguerre_recurrence",
        group: "specfun",
        identity: "(n+1)L_{n+1} = (2n+1+a-x)L_n - (n+a)L_{n-1}",
        tolerance: tol::SERIES,
        run: laguerre_recurrence,
    },
    CheckDef {
        name: "casimir",
        group: "oscillator",
        identity: "Casimir 3/16 - b/4 = k(1-k)",
        tolerance: tol::REDUCTION,
        run: casimir,
    },
    CheckDef {
        name: "psi_orthonormality",
        group: "oscillator",
        identity: "<psi_m|psi_n> = delta_mn",
        tolerance: tol::INNER_PRODUCT,
        run: psi_orthonormality,
    },
    CheckDef {
        name: "psi_eigen_residual",
        group: "oscillator",
        identity: "h0 psi_n = (2n+2k) psi_n",
        tolerance: tol::STENCIL_RESIDUAL,
        run: psi_eigen,
    },
    CheckDef {
        name: "psi_z_normalization",
        group: "oscillator",
        identity: "<psi_z|psi_z> = 1",
        tolerance: tol::INNER_PRODUCT,
        run: psi_z_normalization,
    },
    CheckDef {
        name: "psi_z_series",
        group: "oscillator",
        identity: "closed-form psi_z = N0z sum |a_n| z^n |n>",
        tolerance: tol::INNER_PRODUCT,
        run: psi_z_series,
    },
    CheckDef {
        name: "resolution_mu",
        group: "oscillator",
        identity: "int |z><z| dmu = 1",
        tolerance: tol::CHECK,
        run: resolution_mu,
    },
    CheckDef {
        name: "transformation_function",
        group: "darboux",
        identity: "h0 u_p = alpha u_p",
        tolerance: tol::CHECK,
        run: transformation_function,
    },
    CheckDef {
        name: "l0_consistency",
        group: "darboux",
        identity: "L0 = u_p'/u_p",
        tolerance: tol::INNER_PRODUCT,
        run: l0_consistency,
    },
    CheckDef {
        name: "potential_difference",
        group: "darboux",
        identity: "A_p = -2 (ln u_p)''",
        tolerance: tol::CHECK,
        run: potential_difference,
    },
    CheckDef {
        name: "potential_small_x",
        group: "darboux",
        identity: "A_p - (4k-1)/x^2 -> -1 - p/k as x -> 0",
        tolerance: tol::CHECK,
        run: potential_small_x,
    },
    CheckDef {
        name: "potential_far_field",
        group: "darboux",
        identity: "A_p -> -1 as x -> infinity (at x = 200)",
        tolerance: 1e-3,
        run: potential_far_field,
    },
    CheckDef {
        name: "isospectrality",
        group: "darboux",
        identity: "h1 phi_n = (2n+2k) phi_n",
        tolerance: tol::STENCIL_RESIDUAL,
        run: isospectrality,
    },
    CheckDef {
        name: "phi_orthonormality",
        group: "darboux",
        identity: "<phi_m|phi_n> = delta_mn",
        tolerance: tol::INNER_PRODUCT,
        run: phi_orthonormality,
    },
    CheckDef {
        name: "factorization_initial",
        group: "darboux",
        identity: "L+L psi_n = (E_n - alpha) psi_n",
        tolerance: tol::STENCIL_RESIDUAL,
        run: factorization_initial,
    },
    CheckDef {
        name: "factorization_transformed",
        group: "darboux",
        identity: "LL+ phi_n = (E_n - alpha) phi_n",
        tolerance: tol::STENCIL_RESIDUAL,
        run: factorization_transformed,
    },
    CheckDef {
        name: "inverse_map",
        group: "darboux",
        identity: "psi_n = N_n L+ phi_n",
        tolerance: tol::CHECK,
        run: inverse_map,
    },
    CheckDef {
        name: "intertwining",
        group: "darboux",
        identity: "L h0 = h1 L",
        tolerance: tol::STENCIL_RESIDUAL,
        run: intertwining,
    },
    CheckDef {
        name: "normalization_constant",
        group: "darboux",
        identity: "<phi_n|h1-alpha|phi_n> = 2n+4k+2p (relative)",
        tolerance: tol::CHECK,
        run: normalization_constant,
    },
    CheckDef {
        name: "nonlinear_commutator",
        group: "darboux",
        identity: "[p-,p+] = 2(2k(1-k) - p0 alpha + 4p0^2)(2p0 - alpha) (relative)",
        tolerance: tol::MOMENT,
        run: commutator,
    },
    CheckDef {
        name: "phi_z_normalization",
        group: "transformed_coherent",
        identity: "<phi_z|phi_z> = 1",
        tolerance: tol::INNER_PRODUCT,
        run: phi_z_normalization,
    },
    CheckDef {
        name: "phi_z_series",
        group: "transformed_coherent",
        identity: "N1z L psi_z = N sum b_n z^n phi_n",
        tolerance: tol::INNER_PRODUCT,
        run: phi_z_series,
    },
    CheckDef {
        name: "n1z_factorization",
        group: "transformed_coherent",
        identity: "<psi_z|h0-alpha|psi_z> = N1z^-2 (relative)",
        tolerance: tol::CHECK,
        run: n1z_factorization,
    },
    CheckDef {
        name: "moment_identity",
        group: "transformed_coherent",
        identity: "pi int h x^n (1-x)^{2k+1}/(2k+p-px) dx = n! Gamma(2k)/Gamma(n+2k) (relative)",
        tolerance: tol::MOMENT,
        run: moment_identity,
    },
    CheckDef {
        name: "beta_sum_identity",
        group: "transformed_coherent",
        identity: "term-wise Beta sum with B(n+j+1, 2k+p-j) equals the moment (relative)",
        tolerance: tol::SERIES,
        run: beta_sum_identity,
    },
    CheckDef {
        name: "resolution_nu",
        group: "transformed_coherent",
        identity: "int |phi_z><phi_z| dnu = 1",
        tolerance: tol::CHECK,
        run: resolution_nu,
    },
    CheckDef {
        name: "overlap_series",
        group: "transformed_coherent",
        identity: "zeta1 closed form = N sum b_n^2 (zeta z)^n (relative)",
        tolerance: tol::SERIES,
        run: overlap_series,
    },
    CheckDef {
        name: "bergman_initial",
        group: "holomorphic",
        identity: "sum a_n^2 (z wbar)^n = (1 - z wbar)^{-2k} (relative)",
        tolerance: tol::SERIES,
        run: bergman_initial,
    },
    CheckDef {
        name: "bergman_transformed",
        group: "holomorphic",
        identity: "sum b_n^2 t^n = (1-t)^{-2k-1}(2k+p-pt)/(2k+p) (relative)",
        tolerance: tol::SERIES,
        run: bergman_transformed,
    },
    CheckDef {
        name: "reproducing_property",
        group: "holomorphic",
        identity: "<delta(., z0bar)|f> = f(z0)",
        tolerance: tol::CHECK,
        run: reproducing,
    },
    CheckDef {
        name: "holomorphic_gram_initial",
        group: "holomorphic",
        identity: "<a_m z^m|a_n z^n> = delta_mn under mu",
        tolerance: tol::CHECK,
        run: holo_gram_initial,
    },
    CheckDef {
        name: "holomorphic_gram_transformed",
        group: "holomorphic",
        identity: "<b_m z^m|b_n z^n> = delta_mn under nu",
        tolerance: tol::CHECK,
        run: holo_gram_transformed,
    },
    CheckDef {
        name: "holomorphic_intertwining",
        group: "holomorphic",
        identity: "L(z) k0(z) = p0(z) L(z)",
        tolerance: tol::REDUCTION,
        run: holo_intertwining,
    },
    CheckDef {
        name: "holomorphic_factorization",
        group: "holomorphic",
        identity: "L+(z) L(z) z^n = (E_n - alpha) z^n",
        tolerance: tol::REDUCTION,
        run: holo_factorization,
    },
    CheckDef {
        name: "holomorphic_commutator",
        group: "holomorphic",
        identity: "[p-(z), p+(z)] matches the matrix-element commutator (relative)",
        tolerance: tol::MOMENT,
        run: holo_commutator,
    },
    CheckDef {
        name: "metric_from_potential_initial",
        group: "geometry",
        identity: "g0 = d/dz d/dzbar f0 on s in [0, 0.99]",
        tolerance: tol::INNER_PRODUCT,
        run: metric_initial,
    },
    CheckDef {
        name: "metric_from_potential_transformed",
        group: "geometry",
        identity: "g1 = d/dz d/dzbar f1 on s in [0, 0.99]",
        tolerance: tol::INNER_PRODUCT,
        run: metric_transformed,
    },
    CheckDef {
        name: "potential_from_quadrature",
        group: "geometry",
        identity: "f1 = f0 + ln(<psi_z|h0-alpha|psi_z>/(E0-alpha))",
        tolerance: tol::CHECK,
        run: potential_from_quadrature,
    },
    CheckDef {
        name: "curvature_initial",
        group: "geometry",
        identity: "K0 = -2/k",
        tolerance: tol::CHECK,
        run: curvature_initial,
    },
    CheckDef {
        name: "curvature_transformed_p0",
        group: "geometry",
        identity: "K1 = -2/(k+1/2) at p = 0",
        tolerance: tol::CHECK,
        run: curvature_p0,
    },
    CheckDef {
        name: "curvature_large_k",
        group: "geometry",
        identity: "|K1| -> 0 as k -> infinity (b = 1e4)",
        tolerance: 0.05,
        run: curvature_large_k,
    },
    CheckDef {
        name: "symbols_by_quadrature",
        group: "geometry",
        identity: "<psi_z|h0|psi_z>/2 = K0 and <phi_z|h1|phi_z> = H1",
        tolerance: tol::CHECK,
        run: symbols_by_quadrature,
    },
    CheckDef {
        name: "symbols_by_series",
        group: "geometry",
        identity: "H1 and P+- closed forms equal their coefficient series (relative)",
        tolerance: tol::SERIES,
        run: symbols_by_series,
    },
    CheckDef {
        name: "bracket_relations",
        group: "geometry",
        identity: "{z,K0} = -iz, {K0,K+-} = +-iK+-, {K-,K+} = 2iK0, {P0,P+-} = +-iP+-",
        tolerance: tol::BRACKET,
        run: bracket_relations,
    },
    CheckDef {
        name: "flow_coincidence",
        group: "geometry",
        identity: "K0 flow (initial bracket) = P0 flow (transformed bracket)",
        tolerance: tol::INNER_PRODUCT,
        run: flow_coincidence,
    },
    CheckDef {
        name: "flow_modulus",
        group: "geometry",
        identity: "|z(t)| is conserved",
        tolerance: tol::MOMENT,
        run: flow_modulus,
    },
    CheckDef {
        name: "flow_energy",
        group: "geometry",
        identity: "H(z(t)) is conserved",
        tolerance: tol::INNER_PRODUCT,
        run: flow_energy,
    },
    CheckDef {
        name: "flow_period",
        group: "geometry",
        identity: "z(2 pi) = z0",
        tolerance: tol::INNER_PRODUCT,
        run: flow_period,
    },
    CheckDef {
        name: "p0_reductions",
        group: "reductions",
        identity: "h, zeta1, delta1, f1, g1, K1 at p = 0 equal the initial objects at k+1/2",
        tolerance: tol::REDUCTION,
        run: p0_reductions,
    },
];

/// Names of every registered check, in report order.
pub fn check_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

fn run_check(def: &CheckDef, env: &Env) -> CheckResult {
    let tolerance = env.cfg.tolerance_for(def.tolerance);
    let (residual, pair, error) = match (def.run)(env) {
        Ok(m) => (m.residual, m.pair, None),
        Err(e) => (f64::NAN, None, Some(e.to_string())),
    };
    CheckResult {
        name: def.name,
        group: def.group,
        identity: def.identity,
        residual,
        tolerance,
        passed: residual <= tolerance,
        coarse: pair.map(|p| p.0),
        refined: pair.map(|p| p.1),
        error,
    }
}

fn outcome(passed: bool) -> Option<&'static str> {
    Some(if passed { "PASS" } else { "FAIL" })
}

fn observations(params: &ModelParams) -> Vec<Observation> {
    let mut out = Vec::new();
    let ctx = DarbouxContext::new(*params);
    let pts = disk_sample(20, 0.9);
    let fit = geometry::polynomial_fit_residual(params, 3, &pts).unwrap_or(f64::NAN);
    // At p = 0 the classical algebra is cubic; the threshold concerns p ≥ 1.
    let threshold = 1e-3;
    out.push(Observation {
        name: "algebra_cubic_fit",
        description: "max |fit - {P-,P+}| / max |{P-,P+}| for the best cubic in P0 over 20 disk points",
        value: fit,
        threshold: (params.p > 0).then_some(threshold),
        outcome: if params.p > 0 { outcome(fit > threshold) } else { None },
    });
    out.push(Observation {
        name: "algebra_quintic_fit",
        description: "same residual for the best quintic in P0",
        value: geometry::polynomial_fit_residual(params, 5, &pts).unwrap_or(f64::NAN),
        threshold: None,
        outcome: None,
    });
    let x = 1.5;
    let l0_gap = match (darboux::l0(&ctx, x), darboux::l0_printed(&ctx, x)) {
        (Ok(a), Ok(b)) => relative(b, a),
        _ => f64::NAN,
    };
    out.push(Observation {
        name: "l0_printed_form",
        description: "relative gap between the printed closed form of L0 and u'/u at x = 1.5",
        value: l0_gap,
        threshold: None,
        outcome: None,
    });
    let beta_gap = match (tc::beta_sum(params, 3, BetaIndex::Printed), tc::moment_rhs(params, 3)) {
        (Ok(a), Ok(b)) => relative(a, b),
        _ => f64::NAN,
    };
    out.push(Observation {
        name: "beta_index_printed",
        description: "relative error of the Beta sum with B(n+j-1, .) at n = 3 (undefined at n = 0)",
        value: beta_gap,
        threshold: None,
        outcome: None,
    });
    let (zeta, z) = (c(0.4, 0.3), c(-0.2, 0.5));
    let plus_gap = match (
        tc::zeta1_with(params, zeta, z, OverlapSign::Plus),
        tc::zeta1_series(params, zeta, z),
    ) {
        (Ok(a), Ok(b)) => relative_c(a, b),
        _ => f64::NAN,
    };
    out.push(Observation {
        name: "overlap_plus_sign",
        description: "relative gap between zeta1 with numerator 2k+p+p*zeta*z and its coefficient series",
        value: plus_gap,
        threshold: None,
        outcome: None,
    });
    let zp = c(0.3, 0.4);
    let p0 = Symbol::new(*params, SymbolKind::P0);
    let printed = Symbol::new(*params, SymbolKind::PPlusPrinted);
    let bracket_gap = poisson(params, System::Transformed, &p0, &printed, zp)
        .and_then(|v| Ok(relative_c(v, I * printed.value(zp)?)))
        .unwrap_or(f64::NAN);
    out.push(Observation {
        name: "raising_symbol_printed",
        description: "relative defect of {P0,P+} = iP+ for the printed P+ at z = 0.3+0.4i",
        value: bracket_gap,
        threshold: None,
        outcome: None,
    });
    let comm_gap = holo_commutator_value(*params, 3, TransformedOp::PPlusPrinted)
        .map(|v| relative(v, darboux::nonlinear_commutator_check(&ctx, 3).0))
        .unwrap_or(f64::NAN);
    out.push(Observation {
        name: "holomorphic_raising_printed",
        description: "relative gap between [p-(z), p+(z)] with the printed p+(z) and the matrix elements at n = 3",
        value: comm_gap,
        threshold: None,
        outcome: None,
    });
    out
}

/// Runs the full registry.
pub fn verify(cfg: &VerifyConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let params = make_params(cfg.b, cfg.p)?;
    let ctx = DarbouxContext::new(params);
    let grid = RadialGrid::reference(&params, cfg.n_max, cfg.grid_nodes)?;
    let inner_nodes = grid.nodes.iter().copied().filter(|&x| x >= 0.1).collect();
    let u_nodes = grid.nodes.iter().copied().filter(|&x| (0.1..=U_P_LIMIT).contains(&x)).collect();
    let grid_extent = grid.x_max();
    let env = Env {
        cfg: *cfg,
        params,
        ctx,
        grid,
        inner_nodes,
        u_nodes,
    };
    let checks: Vec<CheckResult> = REGISTRY.iter().map(|d| run_check(d, &env)).collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(VerificationReport {
        parameters: Parameters {
            b: params.b,
            p: params.p,
            k: params.k,
            alpha: params.alpha,
        },
        settings: Settings {
            n_max: cfg.n_max,
            grid_nodes: cfg.grid_nodes,
            grid_extent,
            grid_nodes_per_panel: NODES_PER_PANEL,
            z0: cfg.z0,
            t_end: cfg.t_end,
            dt: cfg.dt,
            tol_coarse: cfg.tol_coarse,
            tol_fine: cfg.tol_fine,
        },
        conventions: Conventions::chosen(),
        observations: observations(&params),
        summary: Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        },
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let mut names = check_names();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn tolerance_routing() {
        let cfg = VerifyConfig {
            tol_coarse: Some(1e-3),
            tol_fine: Some(1e-30),
            ..VerifyConfig::default()
        };
        assert_eq!(cfg.tolerance_for(tol::CHECK), 1e-3);
        assert_eq!(cfg.tolerance_for(tol::BRACKET), 1e-3);
        assert_eq!(cfg.tolerance_for(tol::INNER_PRODUCT), 1e-30);
        assert_eq!(VerifyConfig::default().tolerance_for(tol::SERIES), tol::SERIES);
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            VerifyConfig { b: -1.0, ..Default::default() },
            VerifyConfig { n_max: 0, ..Default::default() },
            VerifyConfig { grid_nodes: 10, ..Default::default() },
            VerifyConfig { tol_fine: Some(0.0), ..Default::default() },
            VerifyConfig { z0: c(1.0, 0.0), ..Default::default() },
            VerifyConfig { dt: -1.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn float_format() {
        let r = CheckResult {
            name: "x",
            group: "g",
            identity: "i",
            residual: f64::NAN,
            tolerance: 0.1,
            passed: false,
            coarse: None,
            refined: None,
            error: Some("boom".into()),
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"residual\":null"));
        assert!(s.contains("\"tolerance\":1.0000000000000001e-1"));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["tolerance"].as_f64(), Some(0.1));
    }

    #[test]
    fn default_run_passes() {
        let report = verify(&VerifyConfig::default()).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}: {} (tol {}) {:?}", c.name, c.residual, c.tolerance, c.error);
        }
        assert_eq!(report.checks.len(), REGISTRY.len());
        assert_eq!(report.to_json(), verify(&VerifyConfig::default()).unwrap().to_json());
    }
}
