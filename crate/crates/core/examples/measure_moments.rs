//! The measure resolving the transformed coherent states: its density,
//! the moment identity behind it and the two Beta-index readings.

use darboux_core::oscillator::make_params;
use darboux_core::transformed_coherent::{self as tc, BetaIndex};

fn main() -> darboux_core::Result<()> {
    let params = make_params(0.5, 3)?;
    println!("density h(s) for b = {}, p = {}", params.b, params.p);
    for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
        println!("  h({s}) = {:.8}", tc::measure_h(&params, s)?);
    }
    println!("{:>3} {:>22} {:>10} {:>10}", "n", "moment", "quad err", "Beta err");
    for n in 0..=10 {
        let rhs = tc::moment_rhs(&params, n)?;
        let lhs = tc::moment_lhs(&params, n)?;
        let beta = tc::beta_sum(&params, n, BetaIndex::Derived)?;
        println!("{n:3} {rhs:22.15e} {:10.1e} {:10.1e}", (lhs / rhs - 1.0).abs(), (beta / rhs - 1.0).abs());
    }
    match tc::beta_sum(&params, 0, BetaIndex::Printed) {
        Ok(v) => println!("index n+j-1 at n = 0: {v}"),
        Err(e) => println!("index n+j-1 at n = 0: {e}"),
    }
    let v = tc::beta_sum(&params, 3, BetaIndex::Printed)?;
    println!("index n+j-1 at n = 3: relative error {:.3}", (v / tc::moment_rhs(&params, 3)? - 1.0).abs());
    for n in 0..=4 {
        let d = tc::resolution_check_transformed(&params, n, n)?;
        println!("<phi_{n}| int |phi_z><phi_z| dnu |phi_{n}> = {:.12}", d.re);
    }
    Ok(())
}
