//! Monte Carlo over uniform initializations, with basin accounting.

use std::collections::BTreeMap;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::critical::{classify_known, CriticalPointRecord};
use crate::engine::{GradientMap, StopPolicy, StopReason, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::dist_inf;
use crate::zoo::{DomainBox, Objective};

/// Infinity-norm distance (and gradient norm) for assigning a limit to a
/// critical point.
pub const BASIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasinLabel {
    /// Index into the critical point list.
    Basin(usize),
    Diverged,
    LeftBox,
    Unresolved,
}

impl std::fmt::Display for BasinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasinLabel::Basin(i) => write!(f, "basin_{i}"),
            BasinLabel::Diverged => f.write_str("diverged"),
            BasinLabel::LeftBox => f.write_str("left_box"),
            BasinLabel::Unresolved => f.write_str("unresolved"),
        }
    }
}

/// Labels a finished trajectory. A limit counts only when the final
/// gradient norm is at most `tol` and exactly one record lies within `tol`
/// (infinity norm) of the final iterate.
pub fn assign_basin(traj: &Trajectory, records: &[CriticalPointRecord], tol: f64) -> Result<BasinLabel> {
    match traj.stop_reason {
        StopReason::Diverged => return Ok(BasinLabel::Diverged),
        StopReason::LeftDomainBox => return Ok(BasinLabel::LeftBox),
        StopReason::GradNormBelowTol | StopReason::MaxIters => {}
    }
    if !(traj.final_grad_norm() <= tol) {
        return Ok(BasinLabel::Unresolved);
    }
    let last = traj.final_iterate();
    let mut hit = None;
    for (i, r) in records.iter().enumerate() {
        if r.location.len() == last.len() && dist_inf(&r.location, last) <= tol {
            if let Some(first) = hit {
                return Err(Error::AmbiguousBasin { first, second: i });
            }
            hit = Some(i);
        }
    }
    Ok(hit.map_or(BasinLabel::Unresolved, BasinLabel::Basin))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloOptions {
    pub policy: StopPolicy,
    pub basin_tol: f64,
    /// Run trials on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self { policy: StopPolicy::default(), basin_tol: BASIN_TOL, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub x0: Vec<f64>,
    pub label: BasinLabel,
    pub iterations: usize,
    pub final_grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinInfo {
    pub index: usize,
    pub location: Vec<f64>,
    pub classification: crate::critical::CriticalClass,
    pub strict_saddle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub objective: Objective,
    pub n_trials: usize,
    pub seed: u64,
    pub alpha: f64,
    pub init_box: DomainBox,
    pub critical_points: Vec<BasinInfo>,
    /// Keyed by critical point index; every index appears, zero counts included.
    pub basin_counts: BTreeMap<usize, usize>,
    pub diverged: usize,
    pub left_box: usize,
    pub unresolved: usize,
    /// Trials whose limit is a strict saddle (local maxima included).
    pub saddle_hits: usize,
}

impl MonteCarloReport {
    pub fn basin_count(&self, index: usize) -> usize {
        self.basin_counts.get(&index).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.basin_counts.values().sum::<usize>() + self.diverged + self.left_box + self.unresolved
    }

    /// Plot-ready counts, one row per outcome: `label,location,classification,count`.
    pub fn write_basin_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["label", "location", "classification", "count"])?;
        for info in &self.critical_points {
            let loc: Vec<String> = info.location.iter().map(f64::to_string).collect();
            out.write_record([
                BasinLabel::Basin(info.index).to_string(),
                loc.join(" "),
                format!("{:?}", info.classification),
                self.basin_count(info.index).to_string(),
            ])?;
        }
        for (label, n) in [
            (BasinLabel::Diverged, self.diverged),
            (BasinLabel::LeftBox, self.left_box),
            (BasinLabel::Unresolved, self.unresolved),
        ] {
            out.write_record([label.to_string(), String::new(), String::new(), n.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Header `trial,x0_1..x0_d,label,iterations,final_grad_norm`.
pub fn write_trials_csv<W: Write>(trials: &[TrialSummary], w: W) -> Result<()> {
    let d = trials.first().map_or(0, |t| t.x0.len());
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["trial".to_string()];
    header.extend((1..=d).map(|i| format!("x0_{i}")));
    header.extend(["label", "iterations", "final_grad_norm"].map(String::from));
    out.write_record(&header)?;
    for t in trials {
        let mut row = vec![t.trial.to_string()];
        row.extend(t.x0.iter().map(f64::to_string));
        row.push(t.label.to_string());
        row.push(t.iterations.to_string());
        row.push(t.final_grad_norm.to_string());
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Per-trial stream: ChaCha8 keyed by `seed`, stream number = trial index.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs `n_trials` uniform initializations in `init_box` and tallies limits.
pub fn monte_carlo(
    obj: &Objective,
    alpha: f64,
    n_trials: usize,
    seed: u64,
    init_box: &DomainBox,
) -> Result<MonteCarloReport> {
    monte_carlo_with(obj, alpha, n_trials, seed, init_box, &MonteCarloOptions::default()).map(|(r, _)| r)
}

/// As [`monte_carlo`], also returning per-trial summaries.
pub fn monte_carlo_with(
    obj: &Objective,
    alpha: f64,
    n_trials: usize,
    seed: u64,
    init_box: &DomainBox,
    options: &MonteCarloOptions,
) -> Result<(MonteCarloReport, Vec<TrialSummary>)> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter("n_trials must be at least 1".into()));
    }
    if !init_box.is_bounded() {
        return Err(Error::InvalidParameter("init box must be bounded".into()));
    }
    if !init_box.is_subset_of(obj.domain_box()) {
        return Err(Error::InvalidParameter("init box must lie inside the domain box".into()));
    }
    let map = GradientMap::new(obj.clone(), alpha)?;
    let records = classify_known(obj)?;

    let run_trial = |trial: usize| -> Result<TrialSummary> {
        let x0 = init_box.sample(&mut trial_rng(seed, trial));
        let traj = map.run(&x0, &options.policy)?;
        let label = assign_basin(&traj, &records, options.basin_tol)?;
        Ok(TrialSummary { trial, x0, label, iterations: traj.iterations(), final_grad_norm: traj.final_grad_norm() })
    };

    #[cfg(feature = "parallel")]
    let trials: Vec<TrialSummary> = if options.parallel {
        use rayon::prelude::*;
        (0..n_trials).into_par_iter().map(run_trial).collect::<Result<_>>()?
    } else {
        (0..n_trials).map(run_trial).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let trials: Vec<TrialSummary> = (0..n_trials).map(run_trial).collect::<Result<_>>()?;

    let mut report = MonteCarloReport {
        objective: obj.clone(),
        n_trials,
        seed,
        alpha,
        init_box: init_box.clone(),
        critical_points: records
            .iter()
            .enumerate()
            .map(|(index, r)| BasinInfo {
                index,
                location: r.location.clone(),
                classification: r.classification,
                strict_saddle: r.strict_saddle,
            })
            .collect(),
        basin_counts: (0..records.len()).map(|i| (i, 0)).collect(),
        diverged: 0,
        left_box: 0,
        unresolved: 0,
        saddle_hits: 0,
    };
    for t in &trials {
        match t.label {
            BasinLabel::Basin(i) => {
                *report.basin_counts.entry(i).or_default() += 1;
                if records[i].strict_saddle {
                    report.saddle_hits += 1;
                }
            }
            BasinLabel::Diverged => report.diverged += 1,
            BasinLabel::LeftBox => report.left_box += 1,
            BasinLabel::Unresolved => report.unresolved += 1,
        }
    }
    Ok((report, trials))
}
