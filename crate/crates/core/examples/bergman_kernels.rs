//! Holomorphic representation on the disk: reproducing kernels and the
//! operators acting on polynomials.

use darboux_core::darboux::{nonlinear_commutator_check, DarbouxContext};
use darboux_core::holomorphic::{self as holo, HoloSeries, TransformedOp};
use darboux_core::oscillator::make_params;
use darboux_core::System;
use num_complex::Complex64;

fn main() -> darboux_core::Result<()> {
    let params = make_params(2.0, 2)?;
    let (z, w) = (Complex64::new(0.6, 0.3), Complex64::new(-0.2, 0.8));
    for system in [System::Initial, System::Transformed] {
        let closed = holo::bergman(system, &params, z, w.conj())?;
        let series = holo::bergman_series(system, &params, z, w.conj())?;
        println!("{system:?} kernel: {closed:.12} (series gap {:.1e})", (closed - series).norm());
    }
    // reproducing property by disk quadrature
    let f = HoloSeries::new(
        System::Transformed,
        params,
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -0.5), Complex64::new(0.25, 0.0)],
    );
    let z0 = Complex64::new(0.4, -0.1);
    let kernel = HoloSeries::kernel(System::Transformed, params, z0.conj())?;
    let q = holo::inner_product_holo(&kernel, &f, 1e-9)?;
    println!("<delta(., z0)|f> = {:.10}, f(z0) = {:.10}", q.value, f.eval(z0));
    // [p-, p+] on monomials against the matrix elements
    let ctx = DarbouxContext::new(params);
    for n in 0..=4 {
        let m = HoloSeries::monomial(System::Transformed, params, n);
        let up = holo::apply_op_transformed(TransformedOp::PPlus, &m)?;
        let a = holo::apply_op_transformed(TransformedOp::PMinus, &up)?.coeffs[n];
        let down = holo::apply_op_transformed(TransformedOp::PMinus, &m)?;
        let b = holo::apply_op_transformed(TransformedOp::PPlus, &down)?.coeffs.get(n).copied().unwrap_or_default();
        let (lhs, rhs) = nonlinear_commutator_check(&ctx, n);
        println!("n = {n}: [p-,p+] = {:.6} holomorphic, {lhs:.6} matrix elements, {rhs:.6} cubic", (a - b).re);
    }
    Ok(())
}
