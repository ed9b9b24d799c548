//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Each export takes an objective string (`nesterov`, `quartic_copositive:[1,0,0,1]`, ...)
//! and returns JSON. The plain `*_json` functions hold the logic so they can
//! be tested natively.

use gdsaddle::critical::classify_known;
use gdsaddle::engine::{GradientMap, StopPolicy};
use gdsaddle::experiments::{assign_basin, BasinLabel, BASIN_TOL};
use gdsaddle::inverse::invert;
use gdsaddle::zoo::Objective;
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Res<T> = std::result::Result<T, String>;

fn map_for(objective: &str, alpha: f64) -> Res<GradientMap> {
    let obj: Objective = objective.parse().map_err(|e: gdsaddle::Error| e.to_string())?;
    // non-positive alpha selects the default θ/L
    let map = if alpha > 0.0 { GradientMap::new(obj, alpha) } else { GradientMap::with_theta(obj, 0.99) };
    map.map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Res<String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TrajectoryOut {
    alpha: f64,
    points: Vec<Vec<f64>>,
    f: Vec<f64>,
    stop_reason: String,
    limit: Option<String>,
}

pub fn trajectory_json(objective: &str, alpha: f64, x0: &[f64], max_iters: usize) -> Res<String> {
    let map = map_for(objective, alpha)?;
    let policy = StopPolicy { max_iters, ..StopPolicy::default() };
    let t = map.run(x0, &policy).map_err(|e| e.to_string())?;
    let records = classify_known(map.objective()).map_err(|e| e.to_string())?;
    let limit = match assign_basin(&t, &records, BASIN_TOL).map_err(|e| e.to_string())? {
        BasinLabel::Basin(i) => map.objective().known_critical_points().get(i).map(|p| p.name.clone()),
        _ => None,
    };
    to_json(&TrajectoryOut {
        alpha: map.alpha(),
        stop_reason: format!("{:?}", t.stop_reason),
        limit,
        f: t.f_values,
        points: t.iterates,
    })
}

#[derive(Serialize)]
struct BasinMapOut {
    alpha: f64,
    /// `[lo_x, hi_x, lo_y, hi_y]`.
    extent: [f64; 4],
    n: usize,
    /// Row-major from the bottom-left cell; index into `names`, or −1 when
    /// the trajectory diverged, left the box or did not settle.
    labels: Vec<i32>,
    names: Vec<String>,
}

/// Limit of the trajectory from each cell centre of an `n × n` grid over
/// the objective's (2-D) box.
pub fn basin_map_json(objective: &str, alpha: f64, n: usize) -> Res<String> {
    let map = map_for(objective, alpha)?;
    let obj = map.objective();
    if obj.dimension() != 2 {
        return Err("basin maps need a 2-D objective".into());
    }
    if n == 0 || n > 400 {
        return Err("grid size must be in 1..=400".into());
    }
    let sb = obj.domain_box().sampling_box();
    let (bx, by) = (sb.0[0], sb.0[1]);
    let records = classify_known(obj).map_err(|e| e.to_string())?;
    let policy = StopPolicy { max_iters: 20_000, ..StopPolicy::default() };
    let mut labels = Vec::with_capacity(n * n);
    for j in 0..n {
        let y = by.lo + (j as f64 + 0.5) * (by.hi - by.lo) / n as f64;
        for i in 0..n {
            let x = bx.lo + (i as f64 + 0.5) * (bx.hi - bx.lo) / n as f64;
            let t = map.run(&[x, y], &policy).map_err(|e| e.to_string())?;
            labels.push(match assign_basin(&t, &records, BASIN_TOL) {
                Ok(BasinLabel::Basin(k)) => k as i32,
                _ => -1,
            });
        }
    }
    to_json(&BasinMapOut {
        alpha: map.alpha(),
        extent: [bx.lo, bx.hi, by.lo, by.hi],
        n,
        labels,
        names: obj.known_critical_points().into_iter().map(|p| p.name).collect(),
    })
}

pub fn invert_json(objective: &str, alpha: f64, y: &[f64]) -> Res<String> {
    let map = map_for(objective, alpha)?;
    let r = invert(&map, y, 1e-10).map_err(|e| e.to_string())?;
    to_json(&r)
}

#[wasm_bindgen]
pub fn trajectory(objective: &str, alpha: f64, x0: Vec<f64>, max_iters: usize) -> Result<String, JsError> {
    trajectory_json(objective, alpha, &x0, max_iters).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = basinMap)]
pub fn basin_map(objective: &str, alpha: f64, n: usize) -> Result<String, JsError> {
    basin_map_json(objective, alpha, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = invertStep)]
pub fn invert_step(objective: &str, alpha: f64, y: Vec<f64>) -> Result<String, JsError> {
    invert_json(objective, alpha, &y).map_err(|e| JsError::new(&e))
}
