use std::io::Write;

use anyhow::{bail, Context, Result};
use gdsaddle::critical::{classify_known, find_critical_points, sample_local_stable_set_with, CriticalPointRecord};
use gdsaddle::engine::{GradientMap, StopReason, Trajectory};
use gdsaddle::experiments::{
    assign_basin, fit_linear_rate, fit_power_rate, monte_carlo_with, select_rate_model, write_trials_csv, BasinLabel,
    MonteCarloOptions, RateFit, BASIN_TOL,
};
use gdsaddle::inverse::{invert_from, ProxSolveReport};
use gdsaddle::zoo::Objective;
use serde::Serialize;
use serde_json::json;

use crate::config::Settings;
use crate::output::{write_atomic, write_json};

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn required<'a>(v: &'a Option<Vec<f64>>, flag: &str, obj: &Objective) -> Result<&'a [f64]> {
    let v = v.as_deref().with_context(|| format!("--{flag} is required"))?;
    if v.len() != obj.dimension() {
        bail!("--{flag} has {} coordinates, objective has dimension {}", v.len(), obj.dimension());
    }
    Ok(v)
}

/// Basin label plus the matching known critical point, if any.
fn label_limit(obj: &Objective, traj: &Trajectory) -> Result<(BasinLabel, Option<String>)> {
    let records = classify_known(obj)?;
    let label = assign_basin(traj, &records, BASIN_TOL)?;
    let name = match label {
        BasinLabel::Basin(i) => obj.known_critical_points().get(i).map(|p| p.name.clone()),
        _ => None,
    };
    Ok((label, name))
}

#[derive(Serialize)]
struct RunSummary<'a> {
    objective: &'a Objective,
    alpha: f64,
    x0: &'a [f64],
    iterations: usize,
    stop_reason: StopReason,
    final_iterate: &'a [f64],
    final_f: f64,
    final_grad_norm: f64,
    basin: String,
    critical_point: Option<String>,
}

pub fn run(s: &Settings) -> Result<()> {
    let obj = s.objective()?;
    let x0 = required(&s.x0, "x0", &obj)?.to_vec();
    let map = s.map(obj.clone())?;
    let traj = map.run(&x0, &s.policy())?;
    let (label, name) = label_limit(&obj, &traj)?;
    let summary = RunSummary {
        objective: &obj,
        alpha: map.alpha(),
        x0: &x0,
        iterations: traj.iterations(),
        stop_reason: traj.stop_reason,
        final_iterate: traj.final_iterate(),
        final_f: *traj.f_values.last().expect("trajectory holds x0"),
        final_grad_norm: traj.final_grad_norm(),
        basin: label.to_string(),
        critical_point: name,
    };
    let dir = s.out_dir();
    write_atomic(&dir.join("trajectory.csv"), |w| Ok(traj.write_csv(w)?))?;
    write_json(&dir.join("summary.json"), &summary)?;
    print_json(&summary)
}

pub fn montecarlo(s: &Settings) -> Result<()> {
    let obj = s.objective()?;
    let map = s.map(obj.clone())?;
    let trials = s.trials.unwrap_or(1000);
    let init_box = s.init_box.clone().unwrap_or_else(|| obj.domain_box().sampling_box());
    let options = MonteCarloOptions { policy: s.policy(), parallel: !s.serial.unwrap_or(false), ..Default::default() };
    let (report, summaries) = monte_carlo_with(&obj, map.alpha(), trials, s.seed.unwrap_or(0), &init_box, &options)?;
    let dir = s.out_dir();
    write_json(&dir.join("montecarlo.json"), &report)?;
    write_atomic(&dir.join("trials.csv"), |w| Ok(write_trials_csv(&summaries, w)?))?;
    write_atomic(&dir.join("basins.csv"), |w| Ok(report.write_basin_csv(w)?))?;
    let mut out = std::io::stdout().lock();
    for (i, count) in &report.basin_counts {
        writeln!(out, "basin_{i}: {count}")?;
    }
    writeln!(out, "diverged: {}", report.diverged)?;
    writeln!(out, "left_box: {}", report.left_box)?;
    writeln!(out, "unresolved: {}", report.unresolved)?;
    writeln!(out, "saddle_hits: {}", report.saddle_hits)?;
    Ok(())
}

pub fn classify(s: &Settings) -> Result<()> {
    let obj = s.objective()?;
    let search = find_critical_points(&obj, s.seeds.unwrap_or(100), s.seed.unwrap_or(0), s.tol.unwrap_or(1e-10))?;
    if let Some(dir) = &s.out {
        write_json(&dir.join("critical_points.json"), &search)?;
    }
    print_json(&search.records)
}

pub fn stable_set(s: &Settings) -> Result<()> {
    let obj = s.objective()?;
    let map = s.map(obj.clone())?;
    let record: CriticalPointRecord = match &s.x0 {
        Some(_) => {
            let x = required(&s.x0, "x0", &obj)?;
            gdsaddle::critical::classify(&obj, x, gdsaddle::critical::DEFAULT_DEGENERACY_TOL)?
        }
        None => classify_known(&obj)?
            .into_iter()
            .find(|r| r.strict_saddle)
            .context("objective has no known strict saddle; pass its location with --x0")?,
    };
    let sample = sample_local_stable_set_with(&map, &record, s.radius.unwrap_or(0.5), s.grid.unwrap_or(41), &s.policy())?;
    let dir = s.out_dir();
    write_atomic(&dir.join("stable_set.csv"), |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x_1", "x_2", "converged_to_saddle"])?;
        for p in &sample.grid {
            out.write_record([p.x[0].to_string(), p.x[1].to_string(), p.converged_to_saddle.to_string()])?;
        }
        out.flush()?;
        Ok(())
    })?;
    print_json(&json!({
        "saddle": record.location,
        "alpha": map.alpha(),
        "grid_points": sample.grid.len(),
        "converged": sample.converged.len(),
        "max_distance_from_stable_subspace": sample.max_distance_from_stable_subspace,
        "grid_spacing": sample.grid_spacing,
        "stable_basis": sample.stable_basis,
    }))
}

#[derive(Serialize)]
struct InvertOutput<'a> {
    y: &'a [f64],
    alpha: f64,
    #[serde(flatten)]
    report: ProxSolveReport,
}

pub fn invert(s: &Settings) -> Result<()> {
    let obj = s.objective()?;
    let y = required(&s.y, "y", &obj)?.to_vec();
    let start = match &s.x0 {
        Some(_) => required(&s.x0, "x0", &obj)?.to_vec(),
        None => y.clone(),
    };
    let map = s.map(obj)?;
    let report = invert_from(&map, &y, &start, s.tol.unwrap_or(1e-10))?;
    let out = InvertOutput { y: &y, alpha: map.alpha(), report };
    if let Some(dir) = &s.out {
        write_json(&dir.join("inverse.json"), &out)?;
    }
    print_json(&out)
}

/// A fit, or the reason none was produced.
#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum FitOutcome {
    Fit(RateFit),
    Error(String),
}

impl From<gdsaddle::Result<RateFit>> for FitOutcome {
    fn from(r: gdsaddle::Result<RateFit>) -> Self {
        r.map_or_else(|e| Self::Error(e.to_string()), Self::Fit)
    }
}

fn default_start(obj: &Objective) -> Vec<f64> {
    obj.domain_box().0.iter().map(|iv| 1.0f64.clamp(iv.lo, iv.hi)).collect()
}

pub fn rates(s: &Settings) -> Result<()> {
    let obj = s.objective()?;
    let x0 = match &s.x0 {
        Some(_) => required(&s.x0, "x0", &obj)?.to_vec(),
        None => default_start(&obj),
    };
    let map: GradientMap = s.map(obj.clone())?;
    let traj = map.run(&x0, &s.policy())?;
    let (label, name) = label_limit(&obj, &traj)?;
    let BasinLabel::Basin(i) = label else {
        bail!("trajectory did not settle at a known critical point ({label}, {:?})", traj.stop_reason);
    };
    let x_star = obj.known_critical_points()[i].location.clone();
    let out = json!({
        "objective": obj,
        "alpha": map.alpha(),
        "x0": x0,
        "x_star": x_star,
        "critical_point": name,
        "iterations": traj.iterations(),
        "stop_reason": traj.stop_reason,
        "linear": FitOutcome::from(fit_linear_rate(&traj, &x_star)),
        "power": FitOutcome::from(fit_power_rate(&traj, &x_star)),
        "selected": FitOutcome::from(select_rate_model(&traj, &x_star)),
    });
    if let Some(dir) = &s.out {
        write_json(&dir.join("rates.json"), &out)?;
    }
    print_json(&out)
}
