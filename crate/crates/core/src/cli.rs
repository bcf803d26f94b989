//! Command-line front end: `verify` runs the check registry, `emit` writes
//! datasets.
//!
//! Exit codes: 0 when every check passes, 1 when any fails, 2 for usage
//! errors and inputs the library rejects, 3 for I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::emit::{self, Dataset, EmitConfig, Format};
use crate::error::Error;
use crate::report::{self, VerifyConfig};
use crate::System;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Verify and tabulate the Darboux-transformed singular oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every identity check and print a JSON report.
    Verify(VerifyArgs),
    /// Write a dataset as CSV or JSON.
    Emit(EmitArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Barrier strength b ≥ 0 in b/x².
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Index p of the transformation function.
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    /// Highest eigenstate index used.
    #[arg(long = "n-max", default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// Initial point of the flow, as `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "0.5,0", allow_hyphen_values = true)]
    pub z0: Complex64,
    /// Step of the RK4 integrator.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Initial,
    Transformed,
}

impl From<SystemArg> for System {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Initial => System::Initial,
            SystemArg::Transformed => System::Transformed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatasetArg {
    Potential,
    Eigen,
    Measure,
    Curvature,
    Trajectory,
    Kernel,
}

impl From<DatasetArg> for Dataset {
    fn from(d: DatasetArg) -> Self {
        match d {
            DatasetArg::Potential => Dataset::Potential,
            DatasetArg::Eigen => Dataset::Eigen,
            DatasetArg::Measure => Dataset::Measure,
            DatasetArg::Curvature => Dataset::Curvature,
            DatasetArg::Trajectory => Dataset::Trajectory,
            DatasetArg::Kernel => Dataset::Kernel,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Total nodes of the reference half-line grid.
    #[arg(long = "grid-nodes", default_value_t = 2000)]
    pub grid_nodes: usize,
    /// Tolerance for finite-difference and quadrature checks (defaults ≥ 1e-7).
    #[arg(long = "tol-coarse")]
    pub tol_coarse: Option<f64>,
    /// Tolerance for closed-form and series checks (defaults < 1e-7).
    #[arg(long = "tol-fine")]
    pub tol_fine: Option<f64>,
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Length of the flows compared in the trajectory checks.
    #[arg(long = "t-end", default_value_t = 4.0 * std::f64::consts::PI)]
    pub t_end: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    /// Dataset to write.
    #[arg(value_enum)]
    pub dataset: DatasetArg,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Sample range `(a, b]`, as `a,b`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Option<(f64, f64)>,
    /// Number of sample points.
    #[arg(long)]
    pub points: Option<usize>,
    /// System for curvature and trajectory datasets.
    #[arg(long, value_enum, default_value_t = SystemArg::Initial)]
    pub system: SystemArg,
    #[command(flatten)]
    pub flow: FlowArgs,
    /// End time of the trajectory.
    #[arg(long = "t-end", default_value_t = 2.0 * std::f64::consts::PI)]
    pub t_end: f64,
    /// Write the dataset here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two numbers `a,b`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    parse_pair(s).map(|(re, im)| Complex64::new(re, im))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    parse_pair(s)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(bytes).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other,
            }
        }
    }
}

fn report_csv(r: &report::VerificationReport) -> String {
    let mut s = String::from("name,group,residual,tolerance,passed\n");
    for c in &r.checks {
        s.push_str(&format!(
            "{},{},{:.16e},{:.16e},{}\n",
            c.name, c.group, c.residual, c.tolerance, c.passed
        ));
    }
    s
}

fn run_verify(args: &VerifyArgs) -> i32 {
    let cfg = VerifyConfig {
        b: args.model.b,
        p: args.model.p,
        n_max: args.model.n_max,
        grid_nodes: args.grid_nodes,
        tol_coarse: args.tol_coarse,
        tol_fine: args.tol_fine,
        z0: args.flow.z0,
        t_end: args.t_end,
        dt: args.flow.dt,
    };
    let report = match report::verify(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("darboux verify: {e}");
            return exit_code(&e);
        }
    };
    let text = match args.format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report_csv(&report),
    };
    if let Err(e) = write_output(args.out.as_ref(), text.as_bytes()) {
        eprintln!("darboux verify: cannot write report: {e}");
        return EXIT_IO;
    }
    for c in report.failures() {
        eprintln!(
            "FAIL {}: residual {:e} > tolerance {:e}{}",
            c.name,
            c.residual,
            c.tolerance,
            c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
    }
    eprintln!("{}/{} checks passed", report.summary.passed, report.summary.total);
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run_emit(args: &EmitArgs) -> i32 {
    let cfg = EmitConfig {
        dataset: args.dataset.into(),
        b: args.model.b,
        p: args.model.p,
        n_max: args.model.n_max,
        range: args.range,
        points: args.points,
        system: args.system.into(),
        z0: args.flow.z0,
        t_end: args.t_end,
        dt: args.flow.dt,
    };
    let table = match emit::emit(&cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("darboux emit: {e}");
            return exit_code(&e);
        }
    };
    let mut bytes = Vec::new();
    table.write(args.format.into(), &mut bytes).expect("writing to memory cannot fail");
    match write_output(args.out.as_ref(), &bytes) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("darboux emit: cannot write output: {e}");
            EXIT_IO
        }
    }
}

/// Parses `argv` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Emit(a) => run_emit(a),
    }
}
