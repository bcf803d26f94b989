//! Invariants over random parameters and points.

use darboux_core::darboux::{self, DarbouxContext};
use darboux_core::emit::{emit, Dataset, EmitConfig};
use darboux_core::geometry::{self, poisson, FnObservable, Observable, Symbol, SymbolKind};
use darboux_core::holomorphic::{self as holo, HoloSeries, TransformedOp};
use darboux_core::oscillator::{self, make_params, ModelParams};
use darboux_core::specfun::{binomial, laguerre_all, log_gamma};
use darboux_core::transformed_coherent as tc;
use darboux_core::System;
use num_complex::Complex64;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn disk_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(u, t)| Complex64::from_polar(r_max * u.sqrt(), t))
}

fn model() -> impl Strategy<Value = ModelParams> {
    (0.0..10.0f64, 0u32..=4).prop_map(|(b, p)| make_params(b, p).unwrap())
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn log_gamma_recurrence(x in 0.1..150.0f64) {
        let d = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
        prop_assert!((d - x.ln()).abs() < 1e-12 * x.ln().abs().max(1.0));
    }

    #[test]
    fn pascal_rule(p in 1u32..40, j in 1u32..40) {
        prop_assume!(j < p);
        prop_assert_eq!(binomial(p, j).unwrap(), binomial(p - 1, j - 1).unwrap() + binomial(p - 1, j).unwrap());
        prop_assert_eq!(binomial(p, j).unwrap(), binomial(p, p - j).unwrap());
    }

    #[test]
    fn laguerre_three_term(alpha in -0.5..10.0f64, x in -5.0..30.0f64) {
        prop_assert!(laguerre_all(30, alpha, x).unwrap().recurrence_residual() < 1e-9);
    }

    #[test]
    fn k_and_energies(p in model()) {
        prop_assert!(p.k >= 0.75);
        prop_assert!((oscillator::casimir_value(&p) - p.k * (1.0 - p.k)).abs() < 1e-12 * p.k * p.k);
        prop_assert_eq!(p.alpha, -2.0 * (p.k + p.p as f64));
        prop_assert!(p.energy(0) > p.alpha);
    }

    #[test]
    fn transformation_function_is_positive(p in model(), x in 0.01..30.0f64) {
        let ctx = DarbouxContext::new(p);
        prop_assert!(darboux::u_p(&ctx, x).unwrap() > 0.0);
        // L annihilates u_p
        let (u, du) = (darboux::u_p(&ctx, x).unwrap(), darboux::u_p_prime(&ctx, x).unwrap());
        prop_assert!(darboux::apply_l(&ctx, x, u, du).unwrap().abs() <= 1e-12 * u.abs());
    }

    #[test]
    fn kernel_series(p in model(), z in disk_point(0.9), w in disk_point(0.9)) {
        for sys in [System::Initial, System::Transformed] {
            let closed = holo::bergman(sys, &p, z, w.conj()).unwrap();
            let series = holo::bergman_series(sys, &p, z, w.conj()).unwrap();
            prop_assert!((closed - series).norm() <= 1e-10 * closed.norm(), "{sys:?}");
        }
        // Hermitian symmetry
        let a = holo::bergman1(&p, z, w.conj()).unwrap();
        let b = holo::bergman1(&p, w, z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn overlap_series(p in model(), zeta in disk_point(0.85), z in disk_point(0.85)) {
        let closed = tc::zeta1(&p, zeta, z).unwrap();
        let series = tc::zeta1_series(&p, zeta, z).unwrap();
        prop_assert!((closed - series).norm() <= 1e-10 * closed.norm());
    }

    #[test]
    fn moments(p in model(), n in 0usize..=20) {
        let lhs = tc::moment_lhs(&p, n).unwrap();
        let rhs = tc::moment_rhs(&p, n).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
    }

    #[test]
    fn measure_density_is_positive(p in model(), s in 0.001..0.999f64) {
        prop_assert!(tc::measure_h(&p, s).unwrap() > 0.0);
        prop_assert!(geometry::g1(&p, s).unwrap() > 0.0);
    }

    #[test]
    fn initial_curvature_is_constant(p in model(), z in disk_point(0.95)) {
        let k = geometry::curvature(&p, System::Initial, z).unwrap();
        prop_assert!((k + 2.0 / p.k).abs() < 1e-6);
    }

    #[test]
    fn bracket_antisymmetry_and_leibniz(p in model(), z in disk_point(0.85)) {
        let a = Symbol::new(p, SymbolKind::PPlus);
        let b = Symbol::new(p, SymbolKind::H1);
        let c = Symbol::new(p, SymbolKind::PMinus);
        let ab = poisson(&p, System::Transformed, &a, &b, z).unwrap();
        let ba = poisson(&p, System::Transformed, &b, &a, z).unwrap();
        prop_assert!((ab + ba).norm() <= 1e-12 * ab.norm().max(1.0));
        // {a, bc} = {a, b} c + b {a, c}, the product through stencils
        let bc = FnObservable(|w: Complex64| b.value(w).unwrap() * c.value(w).unwrap());
        let lhs = poisson(&p, System::Transformed, &a, &bc, z).unwrap();
        let rhs = ab * c.value(z).unwrap() + b.value(z).unwrap() * poisson(&p, System::Transformed, &a, &c, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-6 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn holomorphic_factorization(p in model(), n in 0usize..60) {
        let m = HoloSeries::monomial(System::Transformed, p, n);
        let l = holo::apply_op_transformed(TransformedOp::L, &m).unwrap();
        let ldl = holo::apply_op_transformed(TransformedOp::LDag, &l).unwrap();
        let target = p.energy(n) - p.alpha;
        prop_assert!((ldl.coeffs[n].re - target).abs() <= 1e-13 * target);
    }

    #[test]
    fn commutator_identity(p in model(), n in 0usize..=40) {
        let (lhs, rhs) = darboux::nonlinear_commutator_check(&DarbouxContext::new(p), n);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
    }

    #[test]
    fn p0_reduction(b in 0.0..10.0f64, s in 0.01..0.99f64, z in disk_point(0.9)) {
        let p = make_params(b, 0).unwrap();
        let q = ModelParams::from_k(p.k + 0.5, 0).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        prop_assert!(rel(geometry::g1(&p, s).unwrap(), geometry::g0(&q, s).unwrap()) < 1e-12);
        prop_assert!(rel(tc::measure_h(&p, s).unwrap(), oscillator::measure_mu_weight(&q, s).unwrap()) < 1e-12);
        let w = Complex64::new(0.3, -0.2);
        let a = holo::bergman1(&p, z, w).unwrap();
        prop_assert!((a - holo::bergman0(&q, z, w).unwrap()).norm() < 1e-12 * a.norm());
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn flows_conserve_modulus(p in model(), z0 in disk_point(0.9), t in 0.1..3.0f64) {
        for sys in [System::Initial, System::Transformed] {
            let traj = geometry::hamilton_flow(&p, sys, z0, t, 1e-3).unwrap();
            prop_assert!(traj.modulus_drift() < 1e-9);
            // both flows are the rotation z0 e^{-it}
            let exact = z0 * Complex64::new(0.0, -t).exp();
            prop_assert!((traj.last().z - exact).norm() < 1e-8);
        }
    }

    #[test]
    fn emitted_samples_follow_the_range(a in 0.0..0.5f64, len in 0.01..0.4f64, n in 1usize..200) {
        let cfg = EmitConfig { range: Some((a, a + len)), points: Some(n), ..EmitConfig::new(Dataset::Kernel) };
        let t = emit(&cfg).unwrap();
        prop_assert_eq!(t.rows.len(), n);
        let r = t.column("r").unwrap();
        prop_assert!(r[0] > a);
        prop_assert!((r[n - 1] - (a + len)).abs() < 1e-15);
        prop_assert!(r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn report_floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let s = format!("{x:.16e}");
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }
}
