//! Convergence-rate fits on converged trajectories and the path-length
//! bound implied by a Łojasiewicz certificate.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::lojasiewicz::LojasiewiczCertificate;
use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::{dist2, norm2, sub};

/// Fits need at least this many usable iterates.
pub const MIN_FIT_POINTS: usize = 10;
/// Leading fraction of iterates discarded as transient.
pub const TRANSIENT_FRACTION: f64 = 0.2;
/// Errors below `ERROR_FLOOR_FACTOR · ε` are treated as roundoff.
pub const ERROR_FLOOR_FACTOR: f64 = 100.0;
pub const PATH_LENGTH_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateRegime {
    /// ‖x_k − x*‖ ≈ C b^k.
    Linear,
    /// ‖x_k − x*‖ ≈ C k^p.
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub regime: RateRegime,
    /// `exp(slope)` of log-error against k. Set for the linear regime.
    pub fitted_b: Option<f64>,
    /// Slope of log-error against log k. Set for the power regime.
    pub fitted_exponent: Option<f64>,
    /// Iterate indices used, half-open.
    pub fit_window: Range<usize>,
    pub n_points: usize,
    pub r_squared: f64,
}

struct LineFit {
    slope: f64,
    r_squared: f64,
}

fn least_squares(points: &[(f64, f64)]) -> LineFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    LineFit { slope, r_squared }
}

fn default_window(traj: &Trajectory) -> Range<usize> {
    let n = traj.iterates.len();
    let start = (n as f64 * TRANSIENT_FRACTION).ceil() as usize;
    start..n
}

/// `(k, ‖x_k − x*‖)` over `window`, dropping errors at the roundoff floor.
fn usable_errors(traj: &Trajectory, x_star: &[f64], window: Range<usize>) -> Vec<(usize, f64)> {
    let floor = ERROR_FLOOR_FACTOR * f64::EPSILON;
    let end = window.end.min(traj.iterates.len());
    (window.start..end)
        .map(|k| (k, dist2(&traj.iterates[k], x_star)))
        .filter(|&(_, e)| e >= floor && e.is_finite())
        .collect()
}

pub fn fit_linear_rate(traj: &Trajectory, x_star: &[f64]) -> Result<RateFit> {
    fit_linear_rate_window(traj, x_star, default_window(traj))
}

/// Least-squares slope of `log‖x_k − x*‖` against `k`; `fitted_b = exp(slope)`.
pub fn fit_linear_rate_window(traj: &Trajectory, x_star: &[f64], window: Range<usize>) -> Result<RateFit> {
    let errs = usable_errors(traj, x_star, window.clone());
    if errs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { usable: errs.len(), required: MIN_FIT_POINTS });
    }
    let pts: Vec<(f64, f64)> = errs.iter().map(|&(k, e)| (k as f64, e.ln())).collect();
    let fit = least_squares(&pts);
    let b = fit.slope.exp();
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::NonContracting(b));
    }
    Ok(RateFit {
        regime: RateRegime::Linear,
        fitted_b: Some(b),
        fitted_exponent: None,
        fit_window: window,
        n_points: errs.len(),
        r_squared: fit.r_squared,
    })
}

pub fn fit_power_rate(traj: &Trajectory, x_star: &[f64]) -> Result<RateFit> {
    fit_power_rate_window(traj, x_star, default_window(traj))
}

/// Least-squares slope of `log‖x_k − x*‖` against `log k` (k ≥ 1).
pub fn fit_power_rate_window(traj: &Trajectory, x_star: &[f64], window: Range<usize>) -> Result<RateFit> {
    let window = window.start.max(1)..window.end;
    let errs = usable_errors(traj, x_star, window.clone());
    if errs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { usable: errs.len(), required: MIN_FIT_POINTS });
    }
    let pts: Vec<(f64, f64)> = errs.iter().map(|&(k, e)| ((k as f64).ln(), e.ln())).collect();
    let fit = least_squares(&pts);
    Ok(RateFit {
        regime: RateRegime::Power,
        fitted_b: None,
        fitted_exponent: Some(fit.slope),
        fit_window: window,
        n_points: errs.len(),
        r_squared: fit.r_squared,
    })
}

/// Fits both models on the default window and keeps the one with the higher
/// R². A non-contracting linear fit defers to the power fit.
pub fn select_rate_model(traj: &Trajectory, x_star: &[f64]) -> Result<RateFit> {
    let power = fit_power_rate(traj, x_star)?;
    match fit_linear_rate(traj, x_star) {
        Ok(linear) if linear.r_squared >= power.r_squared => Ok(linear),
        Ok(_) | Err(Error::NonContracting(_)) => Ok(power),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathLengthReport {
    /// Iterates `k ≥ window_start` all lie in the certified neighborhood.
    pub window_start: usize,
    /// Largest `e_k / [2 (f(x_k) − f*)^{1−a} / (α m (1−a))]` over the window.
    pub max_ratio: f64,
    pub passed: bool,
    /// Empirical tail sums `e_k = Σ_{j≥k} ‖x_{j+1} − x_j‖`, one per iterate.
    pub tail_sums: Vec<f64>,
}

/// Tail sums `e_k`, computed back to front so they are non-increasing.
pub fn tail_path_lengths(traj: &Trajectory) -> Vec<f64> {
    let n = traj.iterates.len();
    let mut e = vec![0.0; n];
    for k in (0..n.saturating_sub(1)).rev() {
        e[k] = e[k + 1] + norm2(&sub(&traj.iterates[k + 1], &traj.iterates[k]));
    }
    e
}

/// Compares the empirical path length after each iterate with the bound
/// `e_k ≤ 2 (f(x_k) − f*)^{1−a} / (α m (1−a))`. Only the tail that stays
/// inside the certificate's neighborhood of `x_star` is checked.
pub fn path_length_check(
    traj: &Trajectory,
    certificate: &LojasiewiczCertificate,
    x_star: &[f64],
    f_star: f64,
    alpha: f64,
) -> Result<PathLengthReport> {
    let (a, m) = (certificate.a, certificate.m);
    if !(0.0..1.0).contains(&a) || !(m > 0.0) || !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("need 0 ≤ a < 1, m > 0, alpha > 0 (a={a}, m={m}, alpha={alpha})")));
    }
    if certificate.violations > 0 {
        return Err(Error::Inapplicable(format!("certificate has {} violations", certificate.violations)));
    }
    let n = traj.iterates.len();
    if n == 0 {
        return Err(Error::Inapplicable("empty trajectory".into()));
    }
    let inside = |k: usize| dist2(&traj.iterates[k], x_star) <= certificate.neighborhood_radius;
    if !inside(n - 1) {
        return Err(Error::Inapplicable("trajectory tail is outside the certified neighborhood".into()));
    }
    let mut window_start = n - 1;
    while window_start > 0 && inside(window_start - 1) {
        window_start -= 1;
    }
    let tail_sums = tail_path_lengths(traj);
    let scale = 2.0 / (alpha * m * (1.0 - a));
    let mut max_ratio: f64 = 0.0;
    for (k, &e) in tail_sums.iter().enumerate().skip(window_start) {
        if e == 0.0 {
            continue;
        }
        let gap = traj.f_values[k] - f_star;
        let ratio = if gap > 0.0 { e / (scale * gap.powf(1.0 - a)) } else { f64::INFINITY };
        max_ratio = max_ratio.max(ratio);
    }
    Ok(PathLengthReport { window_start, max_ratio, passed: max_ratio <= 1.0 + PATH_LENGTH_SLACK, tail_sums })
}
