//! Classical phase space: metrics, curvature and Poisson brackets of the
//! covariant symbols on the unit disk.

use darboux_core::geometry::{self, poisson, Observable, Symbol, SymbolKind};
use darboux_core::oscillator::make_params;
use darboux_core::System;
use num_complex::Complex64;

fn main() -> darboux_core::Result<()> {
    let params = make_params(2.0, 2)?;
    println!("{:>5} {:>12} {:>12} {:>10} {:>10}", "s", "g0", "g1", "K0", "K1");
    for s in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let z = Complex64::new(f64::sqrt(s), 0.0);
        println!(
            "{s:5.2} {:12.5} {:12.5} {:10.6} {:10.6}",
            geometry::g0(&params, s)?,
            geometry::g1(&params, s)?,
            geometry::curvature(&params, System::Initial, z)?,
            geometry::curvature(&params, System::Transformed, z)?
        );
    }
    let z = Complex64::new(0.3, 0.4);
    let p0 = Symbol::new(params, SymbolKind::P0);
    let pp = Symbol::new(params, SymbolKind::PPlus);
    let pm = Symbol::new(params, SymbolKind::PMinus);
    println!("at z = {z}:");
    println!("  {{P0,P+}} = {:.10}, iP+ = {:.10}", poisson(&params, System::Transformed, &p0, &pp, z)?, Complex64::i() * pp.value(z)?);
    println!("  {{P-,P+}} = {:.10}", poisson(&params, System::Transformed, &pm, &pp, z)?);
    let pts = geometry::disk_sample(20, 0.9);
    for degree in [3, 5] {
        let r = geometry::polynomial_fit_residual(&params, degree, &pts)?;
        println!("  best degree-{degree} fit of {{P-,P+}} in P0: relative residual {r:.2e}");
    }
    Ok(())
}
