use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specfun::log_gamma;

use super::Scalar;

const NEWTON_EPS: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// A Gauss rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss–Legendre rule with `n` nodes (Newton iteration on the Legendre recurrence).
    pub fn legendre(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= NEWTON_EPS {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Gauss–Jacobi rule for the weight `(1−x)^α (1+x)^β` on `[-1, 1]`.
    ///
    /// Nodes are seeded by the eigenvalues of the Jacobi matrix and polished by
    /// Newton iteration on the three-term recurrence. The result is rejected
    /// unless the nodes come out strictly decreasing and the weights reproduce
    /// the zeroth moment.
    pub fn jacobi(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || n == 0 {
            return Err(domain(
                "gauss_jacobi",
                format!("need α, β > −1 and n ≥ 1 (α = {alpha}, β = {beta}, n = {n})"),
            ));
        }
        let nf = n as f64;
        let ab = alpha + beta;
        let norm = (log_gamma(alpha + nf)? + log_gamma(beta + nf)?
            - log_gamma(nf + 1.0)?
            - log_gamma(nf + ab + 1.0)?)
        .exp();
        let guesses = jacobi_matrix_eigenvalues(n, alpha, beta);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        // P_n(z), P_{n−1}(z), P_n'(z) and the last recurrence coefficient
        let eval = |z: f64| {
            let mut temp = 2.0 + ab;
            let mut p1 = (alpha - beta + temp * z) / 2.0;
            let mut p2 = 1.0;
            for j in 2..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                temp = 2.0 * jf + ab;
                let a = 2.0 * jf * (jf + ab) * (temp - 2.0);
                let b = (temp - 1.0) * (alpha * alpha - beta * beta + temp * (temp - 2.0) * z);
                let c = 2.0 * (jf - 1.0 + alpha) * (jf - 1.0 + beta) * temp;
                p1 = (b * p2 - c * p3) / a;
            }
            let pp = (nf * (alpha - beta - temp * z) * p1 + 2.0 * (nf + alpha) * (nf + beta) * p2)
                / (temp * (1.0 - z * z));
            (p1, p2, pp, temp)
        };
        for guess in guesses {
            let mut z = guess;
            for _ in 0..NEWTON_MAX_ITER {
                let (p1, _, pp, _) = eval(z);
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= NEWTON_EPS * z.abs().max(1e-3) {
                    break;
                }
            }
            // the derivative varies fast near the endpoints, so take it at the final node
            let (_, p2, pp, temp) = eval(z);
            nodes.push(z);
            weights.push(norm * temp * 2f64.powf(ab) / (pp * p2));
        }
        let ordered = nodes.windows(2).all(|w| w[0] > w[1]);
        let inside = nodes.iter().all(|x| x.abs() < 1.0);
        let total: f64 = weights.iter().sum();
        let expected = (ab + 1.0) * 2f64.ln() + log_gamma(alpha + 1.0)? + log_gamma(beta + 1.0)?
            - log_gamma(ab + 2.0)?;
        let expected = expected.exp();
        if !ordered || !inside || ((total - expected) / expected).abs() > 1e-12 {
            return Err(Error::NonConvergence {
                what: "gauss_jacobi nodes",
                coarse: expected,
                refined: total,
            });
        }
        nodes.reverse();
        weights.reverse();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f` for the Legendre rule (for Jacobi rules the weight is implied).
    pub fn integrate<T: Scalar>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + f(mid + half * x) * (w * half))
    }
}

/// Eigenvalues of the symmetric tridiagonal Jacobi matrix, in decreasing order.
fn jacobi_matrix_eigenvalues(n: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let ab = alpha + beta;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let jf = j as f64;
        let diag = if j == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * jf + ab) * (2.0 * jf + ab + 2.0))
        };
        m[(j, j)] = diag;
        if j + 1 < n {
            let k = jf + 1.0;
            let t = 2.0 * k + ab;
            let off = (4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0)))
                .sqrt();
            m[(j, j + 1)] = off;
            m[(j + 1, j)] = off;
        }
    }
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig
}

/// Which composite scheme a [`QuadratureSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Composite Gauss–Legendre on `(0, upper]`.
    HalfLine,
    /// Gauss–Jacobi in `s = |z|²` with rim weight, trapezoid in angle.
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Truncation point of the half-line, or unused for the disk.
    pub upper: f64,
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn half_line(upper: f64, panels: usize, nodes_per_panel: usize, tol: f64) -> Self {
        Self {
            scheme: Scheme::HalfLine,
            panels,
            nodes_per_panel,
            upper,
            tol,
        }
    }
}

/// A quadrature value together with its self-convergence evidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    /// Result at the refined resolution.
    pub value: T,
    /// Result at the base resolution.
    pub coarse: T,
    /// `|value − coarse|`.
    pub change: f64,
    /// Crude estimate of the truncated tail beyond `upper`.
    pub tail: f64,
}

fn composite<T: Scalar>(rule: &GaussRule, upper: f64, panels: usize, f: &impl Fn(f64) -> T) -> T {
    let width = upper / panels as f64;
    (0..panels).fold(T::zero(), |acc, p| {
        let a = p as f64 * width;
        acc + rule.integrate(a, a + width, f)
    })
}

/// `∫_0^∞ f(x) dx` for integrands with at least Gaussian decay.
///
/// The integral is truncated at `spec.upper` and evaluated with composite
/// Gauss–Legendre; it is accepted only if doubling the panel count moves it by
/// less than `spec.tol`.
pub fn halfline_integrate<T: Scalar>(
    f: impl Fn(f64) -> T,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<T>> {
    if spec.panels == 0 || spec.nodes_per_panel == 0 || !(spec.upper > 0.0) {
        return Err(Error::Usage(format!("degenerate quadrature spec {spec:?}")));
    }
    let rule = GaussRule::legendre(spec.nodes_per_panel);
    let coarse = composite(&rule, spec.upper, spec.panels, &f);
    let value = composite(&rule, spec.upper, 2 * spec.panels, &f);
    let change = (value - coarse).magnitude();
    let tail = f(spec.upper).magnitude() * 4.0 / spec.upper;
    if !(change <= spec.tol) {
        return Err(Error::NonConvergence {
            what: "halfline_integrate",
            coarse: coarse.magnitude(),
            refined: value.magnitude(),
        });
    }
    Ok(QuadratureResult {
        value,
        coarse,
        change,
        tail,
    })
}

/// Product rule over the unit disk for integrands of the form
/// `F(z) (1 − |z|²)^γ`, where `F` is smooth up to the rim.
///
/// Radially this is Gauss–Jacobi in `s = |z|²`, which absorbs the rim power
/// exactly; in angle it is the periodic trapezoid rule, exact for
/// trigonometric polynomials of degree below `angular_nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskQuadrature {
    pub rim_exponent: f64,
    pub angular_nodes: usize,
    /// Nodes in `s ∈ (0, 1)` and weights for `∫_0^1 g(s)(1−s)^γ ds`.
    pub s_nodes: Vec<f64>,
    pub s_weights: Vec<f64>,
}

impl DiskQuadrature {
    pub fn new(rim_exponent: f64, radial_nodes: usize, angular_nodes: usize) -> Result<Self> {
        if angular_nodes == 0 {
            return Err(Error::Usage("disk quadrature needs angular nodes".into()));
        }
        let rule = GaussRule::jacobi(radial_nodes, rim_exponent, 0.0)?;
        // s = (1+x)/2 so (1−s)^γ ds = 2^{−γ−1}(1−x)^γ dx
        let scale = 2f64.powf(-rim_exponent - 1.0);
        Ok(Self {
            rim_exponent,
            angular_nodes,
            s_nodes: rule.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
            s_weights: rule.weights.iter().map(|w| w * scale).collect(),
        })
    }

    pub fn radial_nodes(&self) -> usize {
        self.s_nodes.len()
    }

    /// Same rule with twice the radial and angular resolution.
    pub fn refined(&self) -> Result<Self> {
        Self::new(
            self.rim_exponent,
            2 * self.radial_nodes(),
            2 * self.angular_nodes,
        )
    }

    /// `∫_0^1 g(s) (1−s)^γ ds`.
    pub fn integrate_radial<T: Scalar>(&self, g: impl Fn(f64) -> T) -> T {
        self.s_nodes
            .iter()
            .zip(&self.s_weights)
            .fold(T::zero(), |acc, (&s, &w)| acc + g(s) * w)
    }

    /// `∫_{|z|<1} F(z) (1−|z|²)^γ d(Re z) d(Im z)`.
    pub fn integrate(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        let m = self.angular_nodes;
        let dphi = 2.0 * std::f64::consts::PI / m as f64;
        // d²z = ½ ds dφ
        self.integrate_radial(|s| {
            let r = s.sqrt();
            (0..m).fold(Complex64::new(0.0, 0.0), |acc, j| {
                acc + f(Complex64::from_polar(r, j as f64 * dphi))
            }) * (0.5 * dphi)
        })
    }
}

/// Disk integral with a self-convergence check against a refined rule.
pub fn disk_integrate(
    f: impl Fn(Complex64) -> Complex64,
    quad: &DiskQuadrature,
    tol: f64,
) -> Result<QuadratureResult<Complex64>> {
    let coarse = quad.integrate(&f);
    let value = quad.refined()?.integrate(&f);
    let change = (value - coarse).norm();
    if !(change <= tol) {
        return Err(Error::NonConvergence {
            what: "disk_integrate",
            coarse: coarse.norm(),
            refined: value.norm(),
        });
    }
    Ok(QuadratureResult {
        value,
        coarse,
        change,
        tail: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::beta;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 20, 64] {
            let rule = GaussRule::legendre(n);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
                let got: f64 = rule.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-14, "n={n} deg={deg}: {got}");
            }
        }
    }

    #[test]
    fn jacobi_reproduces_beta_moments() {
        for &alpha in &[-0.5, -0.2, 0.0, 0.5, 1.5, 3.0, 10.0] {
            for n in [1usize, 3, 10, 40, 120] {
                let quad = DiskQuadrature::new(alpha, n, 1).unwrap();
                for m in 0..(2 * n).min(40) {
                    let got: f64 = quad.integrate_radial(|s| s.powi(m as i32));
                    let exact = beta(m as f64 + 1.0, alpha + 1.0).unwrap();
                    assert!(
                        ((got - exact) / exact).abs() < 1e-12,
                        "α={alpha} n={n} m={m}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn halfline_gaussian() {
        let spec = QuadratureSpec::half_line(40.0, 50, 20, 1e-13);
        let r = halfline_integrate(|x: f64| (-x * x / 4.0).exp(), &spec).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        let zero = halfline_integrate(|_x: f64| 0.0, &spec).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn halfline_reports_non_convergence() {
        let spec = QuadratureSpec::half_line(40.0, 1, 2, 1e-13);
        let r = halfline_integrate(|x: f64| (x * 3.0).sin() * (-x * x / 8.0).exp(), &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn disk_monomial_pairing() {
        let quad = DiskQuadrature::new(0.5, 16, 64).unwrap();
        let off = quad.integrate(|z| z.powu(3) * z.conj().powu(1));
        assert!(off.norm() < 1e-15);
        // ∫ |z|^2 (1−|z|²)^{1/2} d²z = π B(2, 3/2)
        let on = quad.integrate(|z| z * z.conj());
        assert_relative_eq!(
            on.re,
            std::f64::consts::PI * beta(2.0, 1.5).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn disk_measure_normalization() {
        // (2k−1)/π ∫ (1−s)^{2k} (1−s)^{−2} d²z = 1
        let k = 0.75;
        let quad = DiskQuadrature::new(2.0 * k - 2.0, 8, 8).unwrap();
        let r = disk_integrate(|_| Complex64::new((2.0 * k - 1.0) / std::f64::consts::PI, 0.0), &quad, 1e-13)
            .unwrap();
        assert_relative_eq!(r.value.re, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn jacobi_rejects_bad_parameters() {
        assert!(GaussRule::jacobi(4, -1.0, 0.0).is_err());
        assert!(GaussRule::jacobi(0, 0.5, 0.0).is_err());
    }
}
