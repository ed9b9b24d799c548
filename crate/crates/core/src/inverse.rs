//! Inverse of the gradient map by proximal point on `−f`.
//!
//! The preimage of `y` under `g` is the unique minimizer of
//! `φ(x) = ½‖x − y‖² − αf(x)`. Its gradient is `g(x) − y`, so driving
//! `‖∇φ‖` below a tolerance bounds the forward residual directly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::GradientMap;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{all_finite, dist2, dot, norm2, sub};

/// Inner Newton iteration budget.
pub const INNER_MAX_ITERS: usize = 200;
/// Ratio-violation slack used by [`injectivity_margin_check`].
pub const INJECTIVITY_SLACK: f64 = 1e-9;

const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxSolveReport {
    pub solution: Vec<f64>,
    /// ‖g(solution) − y‖.
    pub residual: f64,
    pub inner_iterations: usize,
    /// `1 − αL`, the strong convexity modulus of the prox objective on the box.
    pub subproblem_modulus: f64,
    /// Inner steps that fell back to a scaled gradient step.
    pub gradient_fallbacks: usize,
}

/// Finds `x` with `‖g(x) − y‖ ≤ tol`, starting the inner solver at `y`.
pub fn invert(map: &GradientMap, y: &[f64], tol: f64) -> Result<ProxSolveReport> {
    invert_from(map, y, y, tol)
}

/// As [`invert`], with an explicit inner starting point.
pub fn invert_from(map: &GradientMap, y: &[f64], start: &[f64], tol: f64) -> Result<ProxSolveReport> {
    let d = map.dimension();
    check_dim(d, y.len())?;
    check_dim(d, start.len())?;
    if !all_finite(y) || !all_finite(start) {
        return Err(Error::InvalidParameter("inverse map needs a finite target and start".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let alpha = map.alpha();
    let obj = map.objective();
    let modulus = map.contraction_margin();
    let lipschitz = obj.lipschitz_bound();
    let fallback_step = 1.0 / (1.0 + alpha * lipschitz);
    let inner_tol = tol * modulus.max(0.0);

    let prox = |x: &[f64]| 0.5 * dist2(x, y).powi(2) - alpha * obj.value_at(x);
    let prox_grad = |x: &[f64]| sub(&map.step_at(x), y);

    let mut x = start.to_vec();
    let mut grad = prox_grad(&x);
    let mut best = (norm2(&grad), x.clone());
    let mut fallbacks = 0;

    for iter in 0..=INNER_MAX_ITERS {
        let gn = norm2(&grad);
        if gn < best.0 {
            best = (gn, x.clone());
        }
        if gn <= inner_tol {
            return Ok(ProxSolveReport {
                solution: x,
                residual: gn,
                inner_iterations: iter,
                subproblem_modulus: modulus,
                gradient_fallbacks: fallbacks,
            });
        }
        if iter == INNER_MAX_ITERS {
            break;
        }

        // Newton on φ: Hessian is Dg(x) = I − α∇²f(x)
        let phi = prox(&x);
        let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
        let newton = map.jacobian_at(&x).cholesky_solve(&neg_grad).filter(|d| all_finite(d));
        let accepted = newton.and_then(|dir| {
            let slope = dot(&grad, &dir);
            if !(slope < 0.0) {
                return None;
            }
            let mut t = 1.0;
            for _ in 0..MAX_BACKTRACKS {
                let cand: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + t * b).collect();
                let phi_c = prox(&cand);
                // near the solution φ stalls at roundoff; accept full steps that shrink ∇φ
                if phi_c <= phi + ARMIJO_C * t * slope || (t == 1.0 && norm2(&prox_grad(&cand)) < gn) {
                    return Some(cand);
                }
                t *= 0.5;
            }
            None
        });
        x = match accepted {
            Some(cand) => cand,
            None => {
                fallbacks += 1;
                x.iter().zip(&grad).map(|(a, g)| a - fallback_step * g).collect()
            }
        };
        if !all_finite(&x) {
            break;
        }
        grad = prox_grad(&x);
    }
    Err(Error::InverseNotConverged { best_residual: best.0, iterations: INNER_MAX_ITERS })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub n_pairs: usize,
    /// Pairs with `x == y`, excluded from the ratio.
    pub skipped: usize,
    /// Smallest ‖g(x) − g(y)‖ / ‖x − y‖ seen.
    pub min_ratio: f64,
    /// `1 − αL`.
    pub bound: f64,
    pub violations: usize,
}

/// Samples pairs in the domain box and checks
/// `‖g(x) − g(y)‖ ≥ (1 − αL)‖x − y‖` up to [`INJECTIVITY_SLACK`].
pub fn injectivity_margin_check(map: &GradientMap, n_pairs: usize, seed: u64) -> Result<InjectivityReport> {
    if n_pairs == 0 {
        return Err(Error::InvalidParameter("n_pairs must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = map.objective().domain_box().sampling_box();
    let pairs: Vec<(Vec<f64>, Vec<f64>)> =
        (0..n_pairs).map(|_| (domain.sample(&mut rng), domain.sample(&mut rng))).collect();
    Ok(margin_over_pairs(map, &pairs))
}

/// Injectivity margin over caller-supplied pairs.
pub fn margin_over_pairs(map: &GradientMap, pairs: &[(Vec<f64>, Vec<f64>)]) -> InjectivityReport {
    let bound = map.contraction_margin();
    let mut report =
        InjectivityReport { n_pairs: pairs.len(), skipped: 0, min_ratio: f64::INFINITY, bound, violations: 0 };
    for (x, y) in pairs {
        let denom = dist2(x, y);
        if denom == 0.0 {
            report.skipped += 1;
            continue;
        }
        let ratio = dist2(&map.step_at(x), &map.step_at(y)) / denom;
        report.min_ratio = report.min_ratio.min(ratio);
        if ratio < bound - INJECTIVITY_SLACK {
            report.violations += 1;
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub n_samples: usize,
    /// max ‖g(invert(y)) − y‖ over sampled `y = g(x)`.
    pub max_forward_residual: f64,
    /// max ‖invert(g(x)) − x‖.
    pub max_inverse_error: f64,
    pub max_inner_iterations: usize,
}

/// Draws `x` uniformly in the domain box, sets `y = g(x)`, inverts, and
/// reports both composition residuals.
pub fn roundtrip_check(map: &GradientMap, n_samples: usize, seed: u64, tol: f64) -> Result<RoundtripReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = map.objective().domain_box().sampling_box();
    let points: Vec<Vec<f64>> = (0..n_samples).map(|_| domain.sample(&mut rng)).collect();
    roundtrip_over_points(map, &points, tol)
}

/// Roundtrip residuals over caller-supplied points.
pub fn roundtrip_over_points(map: &GradientMap, points: &[Vec<f64>], tol: f64) -> Result<RoundtripReport> {
    let mut report = RoundtripReport {
        n_samples: points.len(),
        max_forward_residual: 0.0,
        max_inverse_error: 0.0,
        max_inner_iterations: 0,
    };
    for x in points {
        check_dim(map.dimension(), x.len())?;
        let y = map.step_at(x);
        let solved = invert(map, &y, tol)?;
        let forward = dist2(&map.step_at(&solved.solution), &y);
        report.max_forward_residual = report.max_forward_residual.max(forward);
        report.max_inverse_error = report.max_inverse_error.max(dist2(&solved.solution, x));
        report.max_inner_iterations = report.max_inner_iterations.max(solved.inner_iterations);
    }
    Ok(report)
}
