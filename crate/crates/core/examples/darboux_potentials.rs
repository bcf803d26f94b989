//! The Darboux partner: transformation function, potentials and the
//! transformed eigenfunctions with their ladder matrix elements.

use darboux_core::darboux::{self, DarbouxContext};
use darboux_core::oscillator::{self, make_params, RadialGrid};

fn main() -> darboux_core::Result<()> {
    let params = make_params(2.0, 1)?;
    let ctx = DarbouxContext::new(params);
    println!("alpha = {} (below E_0 = {})", params.alpha, params.e0());
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "V0", "Vp", "Ap");
    for x in [0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0] {
        let a = darboux::a_p(&ctx, x)?;
        let v0 = oscillator::potential(&params, x);
        println!("{x:6.2} {v0:12.5} {:12.5} {a:12.5}", v0 + a);
    }
    let grid = RadialGrid::reference(&params, 8, 2000)?;
    for n in 0..=4 {
        let iso = darboux::isospectral_residual(&ctx, n, &grid.nodes)?;
        let (plus, minus) = darboux::ladder_matrix_elements(&ctx, n);
        println!("phi_{n}: |h1 phi - E phi| = {iso:.1e}, <n+1|p+|n> = {plus:.4}, <n-1|p-|n> = {minus:.4}");
    }
    Ok(())
}
