use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn darboux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 output")
}

#[test]
fn verify_default_point_passes() {
    let o = darboux(&["verify", "--b", "2", "--p", "1", "--n-max", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), darboux_core::report::check_names().len());
    assert!(checks.iter().all(|c| c["passed"] == Value::Bool(true)));
    for key in ["measure", "l0_sign", "beta_index", "bracket_sign"] {
        assert!(v["conventions"][key].is_string(), "{key}");
    }
    assert_eq!(v["parameters"]["k"].as_f64(), Some(1.25));
    assert_eq!(v["summary"]["failed"].as_u64(), Some(0));
}

#[test]
fn negative_barrier_is_a_usage_error() {
    let o = darboux(&["verify", "--b", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b = -1"));
    assert!(o.stdout.is_empty());
}

#[test]
fn impossible_tolerance_lists_failures() {
    let o = darboux(&["verify", "--tol-fine", "1e-30", "--tol-coarse", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("FAIL isospectrality: residual"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed = v["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == Value::Bool(false)).count();
    assert!(failed > 0);
    assert_eq!(v["summary"]["failed"].as_u64(), Some(failed as u64));
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["tolerance"].as_f64(), Some(1e-30));
        assert!(c["residual"].is_number());
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = darboux(&["verify", "--b", "0.5", "--p", "2", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn floats_carry_seventeen_digits() {
    let o = darboux(&["verify", "--format", "json"]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("\"alpha\"")).unwrap();
    assert!(line.contains("-4.5000000000000000e0"), "{line}");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = darboux(&["emit", "potential", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = darboux(&["verify", "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn potential_row_count() {
    let o = darboux(&["emit", "potential", "--b", "2", "--p", "1", "--range", "0.1,10", "--points", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,V0,Vp,Ap"));
    assert_eq!(lines.count(), 500);
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn trajectory_returns_after_one_period() {
    let o = darboux(&["emit", "trajectory", "--z0", "0.5,0", "--t-end", "6.283185307179586", "--system", "transformed"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    assert_eq!(first[0], 0.0);
    assert!(((first[1] - last[1]).powi(2) + (first[2] - last[2]).powi(2)).sqrt() < 1e-8);
}

#[test]
fn initial_curvature_is_constant() {
    let o = darboux(&["emit", "curvature", "--system", "initial", "--b", "2"]);
    let k = 1.25;
    for row in csv_rows(&stdout(&o)) {
        assert!((row[2] + 2.0 / k).abs() < 1e-6, "{row:?}");
    }
}

#[test]
fn json_datasets_are_row_objects() {
    let o = darboux(&["emit", "measure", "--format", "json", "--points", "5", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 3);
    for key in ["s", "mu", "h"] {
        assert!(rows.iter().all(|r| r[key].is_number()));
    }
}

#[test]
fn every_dataset_emits() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["potential", "eigen", "measure", "curvature", "trajectory", "kernel"] {
        let path = dir.path().join(format!("{name}.csv"));
        let o = darboux(&["emit", name, "--points", "20", "--t-end", "1", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(Path::new(&path).exists());
    }
}

#[test]
fn malformed_flags() {
    for args in [
        &["emit", "potential", "--range", "10"][..],
        &["emit", "potential", "--range", "5,1"],
        &["emit", "kernel", "--z0", "x,y"],
        &["verify", "--n-max", "0"],
        &["verify", "--format", "xml"],
        &["emit", "weather"],
        &[],
    ] {
        assert_eq!(darboux(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(darboux(&["--help"]).status.code(), Some(0));
}
