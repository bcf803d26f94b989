//! Tabulated datasets: potentials, eigenfunctions, measure densities,
//! metrics and curvature, classical trajectories and kernels on the diagonal.
//!
//! Sampled datasets use the half-open range `(a, b]` with
//! `xᵢ = a + (b−a) i/N` for `i = 1..=N`. Trajectories ignore the range and
//! follow the flow settings.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;

use crate::darboux::{self, DarbouxContext};
use crate::error::{Error, Result};
use crate::geometry;
use crate::holomorphic;
use crate::oscillator::{self, make_params, ModelParams};
use crate::transformed_coherent as tc;
use crate::System;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dataset {
    /// `x, V0, Vp, Ap`.
    Potential,
    /// `x, psi_0..psi_N, phi_0..phi_N`.
    Eigen,
    /// `s, mu, h`: densities against the area element.
    Measure,
    /// `s, g, K` for the chosen system, along the real axis `z = √s`.
    Curvature,
    /// `t, re, im, abs, energy`.
    Trajectory,
    /// `r, delta0, delta1`: both kernels at `z = w = r`.
    Kernel,
}

impl Dataset {
    pub const ALL: [Dataset; 6] = [
        Self::Potential,
        Self::Eigen,
        Self::Measure,
        Self::Curvature,
        Self::Trajectory,
        Self::Kernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Potential => "potential",
            Self::Eigen => "eigen",
            Self::Measure => "measure",
            Self::Curvature => "curvature",
            Self::Trajectory => "trajectory",
            Self::Kernel => "kernel",
        }
    }

    /// Default `(range, points)` for sampled datasets.
    pub fn default_sampling(self) -> ((f64, f64), usize) {
        match self {
            Self::Potential => ((0.1, 10.0), 500),
            Self::Eigen => ((0.0, 10.0), 200),
            Self::Measure | Self::Curvature => ((0.0, 0.99), 100),
            Self::Kernel => ((0.0, 0.9), 100),
            Self::Trajectory => ((0.0, 0.0), 0),
        }
    }
}

impl std::str::FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown dataset `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Usage(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitConfig {
    pub dataset: Dataset,
    pub b: f64,
    pub p: u32,
    /// Highest index in the `eigen` dataset.
    pub n_max: usize,
    pub range: Option<(f64, f64)>,
    pub points: Option<usize>,
    pub system: System,
    pub z0: Complex64,
    pub t_end: f64,
    pub dt: f64,
}

impl EmitConfig {
    pub fn new(dataset: Dataset) -> Self {
        Self {
            dataset,
            b: 2.0,
            p: 1,
            n_max: 10,
            range: None,
            points: None,
            system: System::Initial,
            z0: Complex64::new(0.5, 0.0),
            t_end: 2.0 * std::f64::consts::PI,
            dt: 1e-3,
        }
    }
}

/// A table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Csv => out.write_all(self.to_csv().as_bytes()),
            Format::Json => out.write_all(self.to_json().as_bytes()),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Array of row objects; non-finite values become `null`.
    pub fn to_json(&self) -> String {
        let keys: Vec<String> = self
            .columns
            .iter()
            .map(|c| serde_json::to_string(c).expect("string keys serialize"))
            .collect();
        let mut s = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            s.push_str("  {");
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                if v.is_finite() {
                    let _ = write!(s, "{}: {v:.16e}", keys[j]);
                } else {
                    let _ = write!(s, "{}: null", keys[j]);
                }
            }
            s.push('}');
            if i + 1 < self.rows.len() {
                s.push(',');
            }
            s.push('\n');
        }
        s.push_str("]\n");
        s
    }
}

fn sample_points(cfg: &EmitConfig, lower_bound: f64, upper_bound: f64) -> Result<Vec<f64>> {
    let (default_range, default_points) = cfg.dataset.default_sampling();
    let (a, b) = cfg.range.unwrap_or(default_range);
    let n = cfg.points.unwrap_or(default_points);
    if n == 0 {
        return Err(Error::Usage("points must be positive".into()));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Usage(format!("range ({a}, {b}] is empty")));
    }
    if a < lower_bound || b > upper_bound {
        return Err(Error::Usage(format!(
            "{} range ({a}, {b}] must lie within [{lower_bound}, {upper_bound}]",
            cfg.dataset.name()
        )));
    }
    Ok((1..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect())
}

fn potential(cfg: &EmitConfig, params: &ModelParams) -> Result<Table> {
    let ctx = DarbouxContext::new(*params);
    let mut t = Table::new(["x", "V0", "Vp", "Ap"]);
    for x in sample_points(cfg, 0.0, 50.0)? {
        let a = darboux::a_p(&ctx, x)?;
        let v0 = oscillator::potential(params, x);
        t.rows.push(vec![x, v0, v0 + a, a]);
    }
    Ok(t)
}

fn eigen(cfg: &EmitConfig, params: &ModelParams) -> Result<Table> {
    let ctx = DarbouxContext::new(*params);
    let n = cfg.n_max;
    let names = (0..=n).map(|i| format!("psi_{i}")).chain((0..=n).map(|i| format!("phi_{i}")));
    let mut t = Table::new(std::iter::once("x".to_string()).chain(names));
    for x in sample_points(cfg, 0.0, 50.0)? {
        let mut row = vec![x];
        row.extend(oscillator::psi_all(params, n, x)?);
        for i in 0..=n {
            row.push(darboux::phi(&ctx, i, x)?);
        }
        t.rows.push(row);
    }
    Ok(t)
}

fn measure(cfg: &EmitConfig, params: &ModelParams) -> Result<Table> {
    let mut t = Table::new(["s", "mu", "h"]);
    for s in sample_points(cfg, 0.0, 1.0)? {
        if s >= 1.0 {
            return Err(Error::Usage("measure range must stay below s = 1".into()));
        }
        t.rows.push(vec![s, oscillator::measure_mu_weight(params, s)?, tc::measure_h(params, s)?]);
    }
    Ok(t)
}

fn curvature(cfg: &EmitConfig, params: &ModelParams) -> Result<Table> {
    let mut t = Table::new(["s", "g", "K"]);
    for s in sample_points(cfg, 0.0, 1.0)? {
        let z = Complex64::new(s.sqrt(), 0.0);
        t.rows.push(vec![
            s,
            geometry::metric(params, cfg.system, s)?,
            geometry::curvature(params, cfg.system, z)?,
        ]);
    }
    Ok(t)
}

fn trajectory(cfg: &EmitConfig, params: &ModelParams) -> Result<Table> {
    let traj = geometry::hamilton_flow(params, cfg.system, cfg.z0, cfg.t_end, cfg.dt)?;
    let h = geometry::Symbol::new(*params, traj.hamiltonian);
    let mut t = Table::new(["t", "re", "im", "abs", "energy"]);
    for st in &traj.states {
        use geometry::Observable;
        t.rows.push(vec![st.t, st.z.re, st.z.im, st.z.norm(), h.value(st.z)?.re]);
    }
    Ok(t)
}

fn kernel(cfg: &EmitConfig, params: &ModelParams) -> Result<Table> {
    let mut t = Table::new(["r", "delta0", "delta1"]);
    for r in sample_points(cfg, 0.0, 1.0)? {
        let z = Complex64::new(r, 0.0);
        t.rows.push(vec![
            r,
            holomorphic::bergman0(params, z, z)?.re,
            holomorphic::bergman1(params, z, z)?.re,
        ]);
    }
    Ok(t)
}

/// Builds the requested dataset.
pub fn emit(cfg: &EmitConfig) -> Result<Table> {
    let params = make_params(cfg.b, cfg.p)?;
    match cfg.dataset {
        Dataset::Potential => potential(cfg, &params),
        Dataset::Eigen => eigen(cfg, &params),
        Dataset::Measure => measure(cfg, &params),
        Dataset::Curvature => curvature(cfg, &params),
        Dataset::Trajectory => trajectory(cfg, &params),
        Dataset::Kernel => kernel(cfg, &params),
    }
}
