//! Hamilton flows on the two phase spaces: different metrics, same curves.

use darboux_core::geometry::hamilton_flow;
use darboux_core::oscillator::make_params;
use darboux_core::System;
use num_complex::Complex64;

fn main() -> darboux_core::Result<()> {
    let params = make_params(2.0, 1)?;
    let z0 = Complex64::new(0.5, 0.2);
    let t_end = 4.0 * std::f64::consts::PI;
    let a = hamilton_flow(&params, System::Initial, z0, t_end, 1e-3)?;
    let b = hamilton_flow(&params, System::Transformed, z0, t_end, 1e-3)?;
    for i in (0..a.states.len()).step_by(2000) {
        let (x, y) = (a.states[i], b.states[i]);
        println!("t = {:7.3}: initial {:.9}  transformed {:.9}", x.t, x.z, y.z);
    }
    let gap = a.states.iter().zip(&b.states).map(|(x, y)| (x.z - y.z).norm()).fold(0.0, f64::max);
    println!("max gap {gap:.1e}; |z| drift {:.1e}; energy drift {:.1e}", b.modulus_drift(), b.energy_drift(&params)?);
    Ok(())
}
