//! Five-point finite-difference stencils. These are used only for residual
//! checks; transformations themselves use analytic derivatives.

use super::Scalar;

/// Second derivative from five equally spaced samples centred on `values[2]`.
/// Error `O(h⁴)`.
pub fn stencil_d2<T: Scalar>(values: [T; 5], h: f64) -> T {
    let [m2, m1, c, p1, p2] = values;
    (p1 + m1) * (16.0 / (12.0 * h * h)) - (p2 + m2) * (1.0 / (12.0 * h * h)) - c * (30.0 / (12.0 * h * h))
}

/// First derivative from five equally spaced samples centred on `values[2]`.
pub fn stencil_d1<T: Scalar>(values: [T; 5], h: f64) -> T {
    let [m2, m1, _, p1, p2] = values;
    (m2 - p2) * (1.0 / (12.0 * h)) + (p1 - m1) * (8.0 / (12.0 * h))
}

/// Second derivative at `values[0]` from a one-sided window `f0..f4`.
pub fn stencil_d2_forward<T: Scalar>(values: [T; 5], h: f64) -> T {
    let [f0, f1, f2, f3, f4] = values;
    (f0 * 35.0 - f1 * 104.0 + f2 * 114.0 - f3 * 56.0 + f4 * 11.0) * (1.0 / (12.0 * h * h))
}

/// Second derivative at `values[1]` from the window `f0..f4`.
pub fn stencil_d2_skewed<T: Scalar>(values: [T; 5], h: f64) -> T {
    let [f0, f1, f2, f3, f4] = values;
    (f0 * 11.0 - f1 * 20.0 + f2 * 6.0 + f3 * 4.0 - f4) * (1.0 / (12.0 * h * h))
}

fn window<T: Scalar>(f: &impl Fn(f64) -> T, x: f64, h: f64) -> [T; 5] {
    [f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h)]
}

/// Samples `f(x + jh)`, `j = −2..=2`, stopping at the first error.
pub fn try_window<T, E>(f: impl Fn(f64) -> Result<T, E>, x: f64, h: f64) -> Result<[T; 5], E> {
    Ok([f(x - 2.0 * h)?, f(x - h)?, f(x)?, f(x + h)?, f(x + 2.0 * h)?])
}

/// `f''(x)` by the central stencil.
pub fn d2_at<T: Scalar>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    stencil_d2(window(&f, x, h), h)
}

/// `f'(x)` by the central stencil.
pub fn d1_at<T: Scalar>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    stencil_d1(window(&f, x, h), h)
}

/// Step for stencils on the half-line: fixed away from the origin, shrinking
/// proportionally near it so that `x − 2h` stays well inside `(0, ∞)` and
/// wavefunctions behaving like non-integer powers of `x` are still resolved.
pub fn radial_step(x: f64) -> f64 {
    (1e-3f64).min(x / 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let f = |x: f64| x * x;
        for &x in &[0.0, 0.3, -2.0, 7.5] {
            assert!((d2_at(f, x, 0.1) - 2.0).abs() < 1e-10);
            assert!((d1_at(f, x, 0.1) - 2.0 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_at_origin_is_zero() {
        let h = 0.05;
        let v = d2_at(f64::sin, 0.0, h);
        assert!(v.abs() <= h.powi(4));
        // odd function: the stencil is exactly antisymmetric
        assert_eq!(v, 0.0);
    }

    #[test]
    fn exponential_taylor_bound() {
        // truncation ≈ h⁴ f⁽⁶⁾/90 ≈ 1.1e−10 at h = 1e−2
        let v = d2_at(f64::exp, 0.0, 1e-2);
        assert!((v - 1.0).abs() < 1e-9);
        let d = d1_at(f64::exp, 0.0, 1e-2);
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn one_sided_stencils() {
        let h = 1e-2;
        let f = |x: f64| (0.7 * x).exp();
        let w = [f(0.0), f(h), f(2.0 * h), f(3.0 * h), f(4.0 * h)];
        assert!((stencil_d2_forward(w, h) - 0.49).abs() < 1e-6);
        assert!((stencil_d2_skewed(w, h) - 0.49 * f(h)).abs() < 1e-6);
    }

    #[test]
    fn complex_samples() {
        use num_complex::Complex64;
        let f = |x: f64| Complex64::new(0.0, 2.0 * x).exp();
        let v = d2_at(f, 0.4, 1e-3);
        assert!((v + f(0.4) * 4.0).norm() < 1e-7);
    }
}
