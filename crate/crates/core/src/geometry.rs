//! Classical phase space: Kähler potentials, metrics, curvature, Poisson
//! brackets, Berezin symbols and Hamiltonian flow on the unit disk.
//!
//! Everything radial is written in `s = |z|²`. For `F(s)` one has
//! `∂_z F = z̄F′`, `∂_z̄ F = zF′` and `∂_z∂_z̄ F = F′ + sF″`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::darboux::{self, DarbouxContext};
use crate::error::{domain, Error, Result};
use crate::numerics::{d1_at, radial_step, stencil_d1, stencil_d2, tol, truncation_order};
use crate::oscillator::{self, check_disk, log_coherent_coeff, ModelParams, RadialGrid};
use crate::transformed_coherent as tc;
use crate::System;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_s(op: &'static str, s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(domain(op, format!("s = {s} must lie in [0, 1)")))
    }
}

// Unchecked forms, also valid slightly below s = 0 for stencils.
fn f0_raw(p: &ModelParams, s: f64) -> f64 {
    -2.0 * p.k * (1.0 - s).ln()
}

fn f1_raw(p: &ModelParams, s: f64) -> f64 {
    let (kp, pf) = (p.kp(), p.p as f64);
    f0_raw(p, s) + ((kp - pf * s) / (kp * (1.0 - s))).ln()
}

fn g0_raw(p: &ModelParams, s: f64) -> f64 {
    2.0 * p.k / ((1.0 - s) * (1.0 - s))
}

fn g1_raw(p: &ModelParams, s: f64) -> f64 {
    let (k, kp, pf) = (p.k, p.kp(), p.p as f64);
    let d = kp - pf * s;
    (2.0 * k + 1.0) / ((1.0 - s) * (1.0 - s)) - pf * kp / (d * d)
}

/// `f⁽⁰⁾ = −2k ln(1−s)`.
pub fn f0(params: &ModelParams, s: f64) -> Result<f64> {
    check_s("f0", s)?;
    Ok(f0_raw(params, s))
}

/// `f⁽¹⁾ = f⁽⁰⁾ + ln[(2k+p−ps)/((2k+p)(1−s))]`.
pub fn f1(params: &ModelParams, s: f64) -> Result<f64> {
    check_s("f1", s)?;
    Ok(f1_raw(params, s))
}

/// `g⁽⁰⁾ = 2k/(1−s)²`.
pub fn g0(params: &ModelParams, s: f64) -> Result<f64> {
    check_s("g0", s)?;
    Ok(g0_raw(params, s))
}

/// `g⁽¹⁾ = (2k+1)/(1−s)² − p(2k+p)/(2k+p−ps)²`.
pub fn g1(params: &ModelParams, s: f64) -> Result<f64> {
    check_s("g1", s)?;
    Ok(g1_raw(params, s))
}

pub fn kahler_potential(params: &ModelParams, system: System, s: f64) -> Result<f64> {
    match system {
        System::Initial => f0(params, s),
        System::Transformed => f1(params, s),
    }
}

pub fn metric(params: &ModelParams, system: System, s: f64) -> Result<f64> {
    match system {
        System::Initial => g0(params, s),
        System::Transformed => g1(params, s),
    }
}

fn metric_raw(params: &ModelParams, system: System, s: f64) -> f64 {
    match system {
        System::Initial => g0_raw(params, s),
        System::Transformed => g1_raw(params, s),
    }
}

fn potential_raw(params: &ModelParams, system: System, s: f64) -> f64 {
    match system {
        System::Initial => f0_raw(params, s),
        System::Transformed => f1_raw(params, s),
    }
}

fn window(f: impl Fn(f64) -> f64, s: f64, h: f64) -> [f64; 5] {
    [f(s - 2.0 * h), f(s - h), f(s), f(s + h), f(s + 2.0 * h)]
}

/// `|g − (F′ + sF″)| / max(1, g)` with the derivatives of the Kähler
/// potential by 5-point stencils.
pub fn metric_from_potential_residual(params: &ModelParams, system: System, s: f64) -> Result<f64> {
    check_s("metric_from_potential_residual", s)?;
    let h = (1e-3f64).min((1.0 - s) / 200.0);
    let base = potential_raw(params, system, s);
    let w = window(|t| potential_raw(params, system, t) - base, s, h);
    let g = metric_raw(params, system, s);
    Ok((g - (stencil_d1(w, h) + s * stencil_d2(w, h))).abs() / g.max(1.0))
}

/// Gauss curvature `−(2/g)(G′ + sG″)`, `G = ln g`, by 5-point stencils in `s`.
pub fn curvature(params: &ModelParams, system: System, z: Complex64) -> Result<f64> {
    let s = check_disk("curvature", z)?;
    let h = (1e-4f64).min((1.0 - s) / 10.0);
    let g = metric_raw(params, system, s);
    let w = window(|t| (metric_raw(params, system, t) / g).ln(), s, h);
    Ok(-2.0 / g * (stencil_d1(w, h) + s * stencil_d2(w, h)))
}

/// `f⁽¹⁾` from its defining bracket `f⁽⁰⁾ + ln(⟨ψ_z|h₀−α|ψ_z⟩/(E₀−α))`
/// with the expectation value by quadrature on `grid`.
pub fn f1_quadrature(params: &ModelParams, z: Complex64, grid: &RadialGrid) -> Result<f64> {
    let s = check_disk("f1_quadrature", z)?;
    let q = tc::n1z_inv_sq_quadrature(params, z, grid)?;
    Ok(f0_raw(params, s) + (q / (params.e0() - params.alpha)).ln())
}

/// Classical observables with their Wirtinger derivatives `(∂_z F, ∂_z̄ F)`.
pub trait Observable {
    fn value(&self, z: Complex64) -> Result<Complex64>;

    /// Defaults to 5-point stencils in `x` and `y`.
    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let h = (2e-4f64).min((1.0 - z.norm()) / 200.0);
        if !(h > 0.0) {
            return Err(domain("wirtinger", format!("|z| = {} must be < 1", z.norm())));
        }
        let eval = |dz: Complex64| self.value(z + dz).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let dx = d1_at(|t| eval(Complex64::new(t, 0.0)), 0.0, h);
        let dy = d1_at(|t| eval(Complex64::new(0.0, t)), 0.0, h);
        let d = ((dx - I * dy) * 0.5, (dx + I * dy) * 0.5);
        if d.0.is_finite() && d.1.is_finite() {
            Ok(d)
        } else {
            Err(Error::Overflow { op: "wirtinger", index: 0 })
        }
    }
}

/// An arbitrary function of `z` (and `z̄`), differentiated by stencils.
pub struct FnObservable<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> Observable for FnObservable<F> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.0)(z))
    }
}

/// The coordinate functions `z` and `z̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Z,
    ZBar,
}

impl Observable for Coordinate {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(match self {
            Self::Z => z,
            Self::ZBar => z.conj(),
        })
    }

    fn wirtinger(&self, _z: Complex64) -> Result<(Complex64, Complex64)> {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Ok(match self {
            Self::Z => (one, zero),
            Self::ZBar => (zero, one),
        })
    }
}

/// `{F, G} = (i/g)(∂_z̄F ∂_zG − ∂_zF ∂_z̄G)`, so that `{z, K₀} = −iz`.
pub fn poisson(
    params: &ModelParams,
    system: System,
    f: &impl Observable,
    g: &impl Observable,
    z: Complex64,
) -> Result<Complex64> {
    let s = check_disk("poisson", z)?;
    let (fz, fzb) = f.wirtinger(z)?;
    let (gz, gzb) = g.wirtinger(z)?;
    Ok(I / metric_raw(params, system, s) * (fzb * gz - fz * gzb))
}

/// Covariant symbols of the two algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    K0,
    KPlus,
    KMinus,
    H1,
    P0,
    PPlus,
    PMinus,
    /// The raising symbol as commonly printed: proportional to `z̄`, with
    /// `(p−1)` instead of `2(p−1)` in the middle term.
    PPlusPrinted,
}

impl SymbolKind {
    pub const ALL: [SymbolKind; 7] = [
        Self::K0,
        Self::KPlus,
        Self::KMinus,
        Self::H1,
        Self::P0,
        Self::PPlus,
        Self::PMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::K0 => "K0",
            Self::KPlus => "K+",
            Self::KMinus => "K-",
            Self::H1 => "H1",
            Self::P0 => "P0",
            Self::PPlus => "P+",
            Self::PMinus => "P-",
            Self::PPlusPrinted => "P+ (printed)",
        }
    }

    /// The system whose bracket the symbol naturally lives in.
    pub fn system(self) -> System {
        match self {
            Self::K0 | Self::KPlus | Self::KMinus => System::Initial,
            _ => System::Transformed,
        }
    }
}

impl std::str::FromStr for SymbolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown symbol `{s}`")))
    }
}

enum Shape {
    Radial,
    TimesZ,
    TimesZBar,
}

/// A closed-form symbol with analytic Wirtinger derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    pub params: ModelParams,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn new(params: ModelParams, kind: SymbolKind) -> Self {
        Self { params, kind }
    }

    /// Shape and radial factor `(Q, Q′)` in `s`.
    fn radial(&self, s: f64) -> (Shape, f64, f64) {
        let p = &self.params;
        let (k, kp, pf) = (p.k, p.kp(), p.p as f64);
        let u = 1.0 - s;
        match self.kind {
            SymbolKind::K0 => (Shape::Radial, k * (1.0 + s) / u, 2.0 * k / (u * u)),
            SymbolKind::KPlus => (Shape::TimesZ, 2.0 * k / u, 2.0 * k / (u * u)),
            SymbolKind::KMinus => (Shape::TimesZBar, 2.0 * k / u, 2.0 * k / (u * u)),
            SymbolKind::H1 | SymbolKind::P0 => {
                let n = kp + 1.0 - pf * s;
                let d = kp - pf * s;
                let m = u * d;
                let dm = -d - pf * u;
                let t = s * n / m;
                let dt = ((n - pf * s) * m - s * n * dm) / (m * m);
                let scale = if self.kind == SymbolKind::H1 { 1.0 } else { 0.5 };
                (Shape::Radial, scale * (2.0 * k + 4.0 * k * t), scale * 4.0 * k * dt)
            }
            SymbolKind::PPlus | SymbolKind::PMinus => {
                let d = kp - pf * s;
                let b = (2.0 * k + 1.0) * (2.0 * k + 2.0) / (u * u)
                    + 2.0 * (pf - 1.0) * (2.0 * k + 1.0) / u
                    + pf * (pf - 1.0);
                let db = 2.0 * (2.0 * k + 1.0) * (2.0 * k + 2.0) / (u * u * u)
                    + 2.0 * (pf - 1.0) * (2.0 * k + 1.0) / (u * u);
                let q = 4.0 * k * b / d;
                let dq = 4.0 * k * (pf * b / (d * d) + db / d);
                let shape = if self.kind == SymbolKind::PPlus { Shape::TimesZ } else { Shape::TimesZBar };
                (shape, q, dq)
            }
            SymbolKind::PPlusPrinted => {
                let d = kp - pf * s;
                let b = (2.0 * k + 1.0) * (2.0 * k + 2.0) / (u * u)
                    + (pf - 1.0) * (2.0 * k + 1.0) / u
                    + pf * (pf - 1.0);
                let db = 2.0 * (2.0 * k + 1.0) * (2.0 * k + 2.0) / (u * u * u)
                    + (pf - 1.0) * (2.0 * k + 1.0) / (u * u);
                (Shape::TimesZBar, 4.0 * k * b / d, 4.0 * k * (pf * b / (d * d) + db / d))
            }
        }
    }
}

impl Observable for Symbol {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        let s = check_disk("symbol", z)?;
        let (shape, q, _) = self.radial(s);
        Ok(match shape {
            Shape::Radial => Complex64::new(q, 0.0),
            Shape::TimesZ => z * q,
            Shape::TimesZBar => z.conj() * q,
        })
    }

    fn wirtinger(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let s = check_disk("symbol", z)?;
        let (shape, q, dq) = self.radial(s);
        let full = Complex64::new(q + s * dq, 0.0);
        Ok(match shape {
            Shape::Radial => (z.conj() * dq, z * dq),
            Shape::TimesZ => (full, z * z * dq),
            Shape::TimesZBar => (z.conj() * z.conj() * dq, full),
        })
    }
}

/// Closed-form symbol value at `z`.
pub fn symbol(params: &ModelParams, kind: SymbolKind, z: Complex64) -> Result<Complex64> {
    Symbol::new(*params, kind).value(z)
}

/// `⟨ψ_z|h₀|ψ_z⟩/2` for `K0`, `⟨φ_z|h₁|φ_z⟩` for `H1` and half of it for
/// `P0`, by quadrature on `grid` with the kinetic term in first-derivative form.
pub fn symbol_quadrature(
    params: &ModelParams,
    kind: SymbolKind,
    z: Complex64,
    grid: &RadialGrid,
) -> Result<f64> {
    check_disk("symbol_quadrature", z)?;
    let energy = |_x: f64, v: Complex64, d: Complex64, pot: f64| d.norm_sqr() + pot * v.norm_sqr();
    match kind {
        SymbolKind::K0 => {
            let total = grid.nodes.iter().zip(&grid.weights).try_fold(0.0, |acc, (&x, &w)| {
                let [v, d] = oscillator::coherent_psi_jet(params, z, x)?;
                Ok::<_, Error>(acc + w * energy(x, v, d, oscillator::potential(params, x)))
            })?;
            Ok(0.5 * total)
        }
        SymbolKind::H1 | SymbolKind::P0 => {
            let ctx = DarbouxContext::new(*params);
            let total = grid.nodes.iter().zip(&grid.weights).try_fold(0.0, |acc, (&x, &w)| {
                let v = tc::phi_z(params, z, x)?;
                let d = d1_at(
                    |t| tc::phi_z(params, z, t).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                    x,
                    radial_step(x),
                );
                Ok::<_, Error>(acc + w * energy(x, v, d, darboux::v_p(&ctx, x)?))
            })?;
            Ok(if kind == SymbolKind::P0 { 0.5 * total } else { total })
        }
        other => Err(Error::Usage(format!("no quadrature route for symbol {}", other.name()))),
    }
}

/// Coefficient-series form of the transformed symbols `H1`, `P0`, `P±`,
/// built from the matrix elements of `h₁` and `p₊` in the `{φₙ}` basis.
pub fn symbol_series(params: &ModelParams, kind: SymbolKind, z: Complex64) -> Result<Complex64> {
    let s = check_disk("symbol_series", z)?;
    let (k, kp, pf) = (params.k, params.kp(), params.p as f64);
    // N² = (1−s)^{2k+1}(2k+p)/(2k+p−ps)
    let norm_sq = (1.0 - s).powf(2.0 * k + 1.0) * kp / (kp - pf * s);
    let term: Box<dyn Fn(usize) -> Result<f64>> = match kind {
        SymbolKind::H1 | SymbolKind::P0 => Box::new(|n| {
            Ok((2.0 * tc::log_b(params, n)?).exp() * params.energy(n))
        }),
        SymbolKind::PPlus | SymbolKind::PMinus => Box::new(|n| {
            let nf = n as f64;
            Ok(2.0 * (2.0 * log_coherent_coeff(params, n)?).exp()
                * (nf + 2.0 * k)
                * (nf + kp)
                * (nf + kp + 1.0)
                / kp)
        }),
        other => {
            return Err(Error::Usage(format!("no series route for symbol {}", other.name())))
        }
    };
    let n_max = if s == 0.0 {
        0
    } else {
        truncation_order(
            "symbol series",
            |n| term(n).map(|t| t * s.powi(n as i32)).unwrap_or(f64::NAN),
            tol::TRUNCATION,
            4 * tol::TRUNCATION_CAP,
        )?
    };
    let mut sum = 0.0;
    let mut sn = 1.0;
    for n in 0..=n_max {
        sum += term(n)? * sn;
        sn *= s;
    }
    let radial = norm_sq * sum;
    Ok(match kind {
        SymbolKind::H1 => Complex64::new(radial, 0.0),
        SymbolKind::P0 => Complex64::new(0.5 * radial, 0.0),
        SymbolKind::PPlus => z * radial,
        _ => z.conj() * radial,
    })
}

/// A point of a classical trajectory.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ClassicalState {
    pub t: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub z: Complex64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = ser.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub system: System,
    pub hamiltonian: SymbolKind,
    pub states: Vec<ClassicalState>,
}

impl Trajectory {
    pub fn last(&self) -> &ClassicalState {
        self.states.last().expect("trajectory always holds its initial state")
    }

    /// `max_t |H(z(t)) − H(z₀)|`.
    pub fn energy_drift(&self, params: &ModelParams) -> Result<f64> {
        let h = Symbol::new(*params, self.hamiltonian);
        let e0 = h.value(self.states[0].z)?;
        self.states
            .iter()
            .try_fold(0.0f64, |acc, st| Ok(acc.max((h.value(st.z)? - e0).norm())))
    }

    /// `max_t ||z(t)| − |z₀||`.
    pub fn modulus_drift(&self) -> f64 {
        let r0 = self.states[0].z.norm();
        self.states.iter().map(|st| (st.z.norm() - r0).abs()).fold(0.0, f64::max)
    }
}

/// Hamilton function used for each system's flow: `K₀` and `P₀ = H₁/2`.
pub fn flow_hamiltonian(system: System) -> SymbolKind {
    match system {
        System::Initial => SymbolKind::K0,
        System::Transformed => SymbolKind::P0,
    }
}

/// RK4 integration of `ż = {z, H}` with the system's default Hamiltonian.
pub fn hamilton_flow(
    params: &ModelParams,
    system: System,
    z0: Complex64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    hamilton_flow_with(params, system, flow_hamiltonian(system), z0, t_end, dt)
}

/// Per-step bound on the change of `|z|`; the exact flows conserve it.
pub const STEP_DRIFT_LIMIT: f64 = 1e-9;

pub fn hamilton_flow_with(
    params: &ModelParams,
    system: System,
    hamiltonian: SymbolKind,
    z0: Complex64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    check_disk("hamilton_flow", z0)?;
    if !(dt > 0.0 && dt.is_finite() && t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Usage(format!(
            "flow needs dt > 0 and t_end ≥ 0 (got dt = {dt}, t_end = {t_end})"
        )));
    }
    let h = Symbol::new(*params, hamiltonian);
    let field = |z: Complex64| poisson(params, system, &Coordinate::Z, &h, z);
    let steps = (t_end / dt).ceil() as usize;
    let mut states = Vec::with_capacity(steps + 1);
    let mut st = ClassicalState { t: 0.0, z: z0 };
    states.push(st);
    for i in 0..steps {
        let t_next = if i + 1 == steps { t_end } else { (i + 1) as f64 * dt };
        let tau = t_next - st.t;
        let k1 = field(st.z)?;
        let k2 = field(st.z + k1 * (0.5 * tau))?;
        let k3 = field(st.z + k2 * (0.5 * tau))?;
        let k4 = field(st.z + k3 * tau)?;
        let z = st.z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (tau / 6.0);
        let drift = (z.norm() - st.z.norm()).abs();
        if !(drift <= STEP_DRIFT_LIMIT && z.norm() < 1.0) {
            return Err(Error::StepRejected { time: t_next, drift });
        }
        st = ClassicalState { t: t_next, z };
        states.push(st);
    }
    Ok(Trajectory {
        system,
        hamiltonian,
        states,
    })
}

/// Deterministic sample of `count` disk points with `|z| ≤ r_max`
/// (golden-angle spiral, radii evenly spaced in `(0, r_max]`).
pub fn disk_sample(count: usize, r_max: f64) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|j| Complex64::from_polar(r_max * (j + 1) as f64 / count as f64, j as f64 * golden))
        .collect()
}

/// Best least-squares fit of `{P₋, P₊}` by a polynomial of `degree` in `P₀`
/// over `points`; returns `max |fit − value| / max |value|`.
pub fn polynomial_fit_residual(params: &ModelParams, degree: usize, points: &[Complex64]) -> Result<f64> {
    if points.len() <= degree + 1 {
        return Err(Error::Usage(format!(
            "need more than {} points for a degree-{degree} fit",
            degree + 1
        )));
    }
    let pm = Symbol::new(*params, SymbolKind::PMinus);
    let pp = Symbol::new(*params, SymbolKind::PPlus);
    let p0 = Symbol::new(*params, SymbolKind::P0);
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &z in points {
        // {P₋, P₊} is i times a real radial function
        ys.push(poisson(params, System::Transformed, &pm, &pp, z)?.im);
        xs.push(p0.value(z)?.re);
    }
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let scale = |x: f64| if hi > lo { (2.0 * x - lo - hi) / (hi - lo) } else { 0.0 };
    let a = DMatrix::from_fn(xs.len(), degree + 1, |i, j| scale(xs[i]).powi(j as i32));
    let y = DVector::from_vec(ys);
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Usage(format!("least squares failed: {e}")))?;
    let resid = (&a * coef - &y).amax();
    Ok(resid / y.amax())
}
