//! Coherent states of both systems: closed forms against coefficient
//! series, and their norms by quadrature.

use darboux_core::oscillator::{self, make_params, RadialGrid};
use darboux_core::transformed_coherent as tc;
use num_complex::Complex64;

fn main() -> darboux_core::Result<()> {
    let params = make_params(2.0, 2)?;
    for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.6, 0.5)] {
        let grid = RadialGrid::coherent(&params, z, 4000)?;
        let x = 1.7;
        let psi = oscillator::coherent_psi(&params, z, x)?;
        let psi_series = oscillator::coherent_psi_series(&params, z, x)?;
        let phi = tc::phi_z(&params, z, x)?;
        let phi_series = tc::phi_z_series(&params, z, x)?;
        println!("z = {z}");
        println!("  psi_z({x}) = {psi:.10}  series gap {:.1e}", (psi - psi_series).norm());
        println!("  phi_z({x}) = {phi:.10}  series gap {:.1e}", (phi - phi_series).norm());
        println!("  <phi_z|phi_z> = {:.12}", tc::phi_z_norm_sq(&params, z, &grid)?);
        let q = tc::n1z_inv_sq_quadrature(&params, z, &grid)?;
        let n1 = tc::n1z(&params, z.norm_sqr())?;
        println!("  <psi_z|h0-alpha|psi_z> = {q:.10}, N1z^-2 = {:.10}", 1.0 / (n1 * n1));
    }
    Ok(())
}
