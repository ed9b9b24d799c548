use std::path::Path;
use std::process::{Command, Output};

fn gdsaddle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdsaddle")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn help_exits_zero() {
    assert!(gdsaddle(&["--help"]).status.success());
    for sub in ["run", "montecarlo", "classify", "stable-set", "invert", "rates"] {
        assert!(gdsaddle(&[sub, "--help"]).status.success(), "{sub}");
    }
}

#[test]
fn bad_input_fails() {
    for args in [
        &["run", "--objective", "nesterov", "--x0", "0.5,zz"][..],
        &["run", "--objective", "nesterov", "--x0", "0.5"],
        &["montecarlo", "--objective", "nesterov", "--trials", "0"],
        &["run", "--objective", "nesterov", "--alpha", "0.1", "--x0", "0,0"],
        &["run", "--objective", "no_such_thing", "--x0", "0,0"],
        &["run", "--x0", "0,0"],
    ] {
        let out = gdsaddle(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn run_reports_basin_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let v = stdout_json(&gdsaddle(&["run", "--objective", "nesterov", "--theta", "0.9", "--x0", "0.5,0.3", "--out", d]));
    assert_eq!(v["critical_point"], "z3");
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("k,x_1,x_2,f,grad_norm\n0,0.5,0.3,"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary, v);
}

fn montecarlo_json(dir: &Path, extra: &[&str]) -> Vec<u8> {
    let d = dir.to_str().unwrap();
    let mut args = vec!["montecarlo", "--objective", "nesterov", "--trials", "300", "--seed", "5", "--out", d];
    args.extend_from_slice(extra);
    let out = gdsaddle(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("saddle_hits: 0"));
    std::fs::read(dir.join("montecarlo.json")).unwrap()
}

#[test]
fn montecarlo_is_byte_reproducible() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = montecarlo_json(a.path(), &[]);
    assert_eq!(first, montecarlo_json(b.path(), &[]));
    assert_eq!(first, montecarlo_json(c.path(), &["--serial"]));
    assert_eq!(std::fs::read(a.path().join("trials.csv")).unwrap(), std::fs::read(c.path().join("trials.csv")).unwrap());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"objective": "nesterov", "alpha": 0.05, "x0": [0.5, -0.3]}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let d = dir.path().to_str().unwrap();
    let v = stdout_json(&gdsaddle(&["run", "--config", c, "--out", d]));
    assert_eq!(v["alpha"], 0.05);
    assert_eq!(v["critical_point"], "z2");
    let v = stdout_json(&gdsaddle(&["run", "--config", c, "--alpha", "0.02", "--x0", "0.5,0.3", "--out", d]));
    assert_eq!(v["alpha"], 0.02);
    assert_eq!(v["critical_point"], "z3");
}

#[test]
fn theta_defaults_to_099() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&gdsaddle(&["run", "--objective", "nesterov", "--x0", "0.5,0.3", "--out", dir.path().to_str().unwrap()]));
    assert_eq!(v["alpha"].as_f64().unwrap(), 0.99 / 11.0);
}

#[test]
fn classify_lists_nesterov_points() {
    let v = stdout_json(&gdsaddle(&["classify", "--objective", "nesterov", "--seeds", "50"]));
    let classes: Vec<_> = v.as_array().unwrap().iter().map(|r| r["classification"].as_str().unwrap().to_owned()).collect();
    assert_eq!(classes, ["LocalMin", "StrictSaddle", "LocalMin"]);
}

#[test]
fn invert_with_wider_box() {
    // y = g(1, 2) for α = 0.01 on [−3, 3]²; the certified preimage is (1, 2)
    let v = stdout_json(&gdsaddle(&[
        "invert", "--objective", "nesterov", "--domain-box", "-3,3", "--alpha", "0.01", "--y", "0.99,1.94",
    ]));
    let x: Vec<f64> = serde_json::from_value(v["solution"].clone()).unwrap();
    assert!((x[0] - 1.0).abs() <= 1e-9 && (x[1] - 2.0).abs() <= 1e-9, "{x:?}");
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn rates_on_convex_quadratic() {
    let v = stdout_json(&gdsaddle(&["rates", "--objective", "strongly_convex_quadratic:[1,3]", "--alpha", "0.2"]));
    let b = v["linear"]["fit"]["fitted_b"].as_f64().unwrap();
    assert!((b - 0.8).abs() <= 0.04, "{b}");
    assert_eq!(v["selected"]["fit"]["regime"], "Linear");
}

#[test]
fn stable_set_csv_lies_on_axis() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let v = stdout_json(&gdsaddle(&["stable-set", "--objective", "nesterov", "--alpha", "0.05", "--grid", "21", "--out", d]));
    assert!(v["converged"].as_u64().unwrap() > 0);
    let csv = std::fs::read_to_string(dir.path().join("stable_set.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x_1,x_2,converged_to_saddle"));
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        if f[2] == "true" {
            assert_eq!(f[1].parse::<f64>().unwrap(), 0.0);
        }
    }
}
