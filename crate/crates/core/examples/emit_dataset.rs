//! Writes the potential dataset as CSV, the same table `darboux emit potential` prints.

use darboux_core::emit::{emit, Dataset, EmitConfig, Format};

fn main() -> darboux_core::Result<()> {
    let cfg = EmitConfig { range: Some((0.5, 5.0)), points: Some(10), ..EmitConfig::new(Dataset::Potential) };
    let table = emit(&cfg)?;
    table.write(Format::Csv, &mut std::io::stdout())?;
    Ok(())
}
