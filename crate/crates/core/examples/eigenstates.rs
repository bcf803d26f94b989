//! Eigenstates of the singular oscillator: energies, wavefunctions and
//! their orthonormality on the reference grid.

use darboux_core::oscillator::{self, make_params, RadialGrid};

fn main() -> darboux_core::Result<()> {
    let params = make_params(2.0, 0)?;
    println!("b = {}, k = {}, E_n = 2n + 2k", params.b, params.k);
    let grid = RadialGrid::reference(&params, 6, 2000)?;
    for n in 0..=6 {
        let residual = oscillator::eigen_residual(&params, n, &grid.nodes)?;
        println!(
            "n = {n}: E = {:5.2}  psi(1) = {:+.6}  |h0 psi - E psi| = {residual:.1e}",
            params.energy(n),
            oscillator::psi(&params, n, 1.0)?
        );
    }
    let gram = oscillator::gram_matrix(&params, 6, &grid)?;
    let defect = gram
        .iter()
        .enumerate()
        .flat_map(|(m, row)| row.iter().enumerate().map(move |(n, v)| (v - f64::from(m == n)).abs()))
        .fold(0.0, f64::max);
    println!("max |<psi_m|psi_n> - delta_mn| = {defect:.1e}");
    Ok(())
}
