use gdsaddle_wasm::{basin_map_json, invert_json, trajectory_json};
use serde_json::Value;

#[test]
fn trajectory_reaches_upper_minimum() {
    let v: Value = serde_json::from_str(&trajectory_json("nesterov", 0.0, &[0.5, 0.3], 10_000).unwrap()).unwrap();
    assert_eq!(v["limit"], "z3");
    assert_eq!(v["points"][0], serde_json::json!([0.5, 0.3]));
    assert_eq!(v["alpha"].as_f64().unwrap(), 0.99 / 11.0);
}

#[test]
fn basin_map_is_mirror_symmetric() {
    let n = 16;
    let v: Value = serde_json::from_str(&basin_map_json("nesterov", 0.05, n).unwrap()).unwrap();
    let labels: Vec<i64> = v["labels"].as_array().unwrap().iter().map(|l| l.as_i64().unwrap()).collect();
    assert_eq!(labels.len(), n * n);
    // rows below the x-axis go to z2 (index 1), rows above to z3 (index 2)
    for j in 0..n {
        let want = if j < n / 2 { 1 } else { 2 };
        assert!(labels[j * n..(j + 1) * n].iter().all(|&l| l == want), "row {j}");
    }
}

#[test]
fn invert_roundtrip_and_errors() {
    let v: Value = serde_json::from_str(&invert_json("nesterov", 0.05, &[0.5, 0.5]).unwrap()).unwrap();
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
    assert!(trajectory_json("nesterov", 0.5, &[0.0, 0.0], 10).is_err());
    assert!(basin_map_json("quartic_copositive:[1]", 0.1, 4).is_err());
    assert!(invert_json("bogus", 0.1, &[0.0]).is_err());
}
