//! Runs the verification registry at `b` and `p` given on the command line
//! (defaults 2 and 1) and prints one line per check.

use darboux_core::report::{verify, VerifyConfig};

fn main() -> darboux_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let b = args.next().map_or(Ok(2.0), |s| s.parse()).map_err(|e| darboux_core::Error::Usage(format!("b: {e}")))?;
    let p = args.next().map_or(Ok(1), |s| s.parse()).map_err(|e| darboux_core::Error::Usage(format!("p: {e}")))?;
    let report = verify(&VerifyConfig { b, p, ..VerifyConfig::default() })?;
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:<34} {:10.2e} (tol {:.0e})", c.name, c.residual, c.tolerance);
    }
    for o in &report.observations {
        println!("note {:<33} {:10.2e} {}", o.name, o.value, o.outcome.unwrap_or(""));
    }
    println!("{}/{} passed", report.summary.passed, report.summary.total);
    Ok(())
}
