//! The gradient map `g(x) = x − α∇f(x)`, its Jacobian, and iteration.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{all_finite, norm2, Matrix};
use crate::zoo::Objective;

/// Default θ for the `α = θ/L` helper.
pub const DEFAULT_THETA: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopPolicy {
    /// Stop once ‖∇f(x_k)‖ ≤ tol.
    pub tol: f64,
    /// Stop once ‖x_k‖ ≥ divergence_radius.
    pub divergence_radius: f64,
    pub max_iters: usize,
}

impl Default for StopPolicy {
    fn default() -> Self {
        Self { tol: 1e-10, divergence_radius: 1e6, max_iters: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopReason {
    GradNormBelowTol,
    Diverged,
    MaxIters,
    LeftDomainBox,
}

/// Gradient descent with a constant step `alpha`; `alpha · L < 1` is
/// checked at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientMap {
    objective: Objective,
    alpha: f64,
}

impl GradientMap {
    pub fn new(objective: Objective, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("step size must be positive and finite, got {alpha}")));
        }
        let lipschitz = objective.lipschitz_bound();
        if !(alpha * lipschitz < 1.0) {
            return Err(Error::StepSizeTooLarge { alpha, lipschitz });
        }
        Ok(Self { objective, alpha })
    }

    /// `alpha = theta / L`, with `0 < theta < 1`.
    pub fn with_theta(objective: Objective, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter(format!("theta must lie in (0, 1), got {theta}")));
        }
        let l = objective.lipschitz_bound();
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "theta/L step needs a finite positive Lipschitz bound, got {l}"
            )));
        }
        Self::new(objective, theta / l)
    }

    /// Skips the step-size check. Only for validating degenerate cases
    /// such as `alpha = 0`.
    pub fn new_unchecked(objective: Objective, alpha: f64) -> Self {
        Self { objective, alpha }
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    /// `1 − α L`, the lower bound on the singular values of `Dg` over the box.
    pub fn contraction_margin(&self) -> f64 {
        1.0 - self.alpha * self.objective.lipschitz_bound()
    }

    pub fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.step_at(x))
    }

    pub(crate) fn step_at(&self, x: &[f64]) -> Vec<f64> {
        let g = self.objective.gradient_at(x);
        step_with_gradient(x, &g, self.alpha)
    }

    /// `Dg(x) = I − α∇²f(x)`.
    pub fn jacobian(&self, x: &[f64]) -> Result<Matrix> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.jacobian_at(x))
    }

    pub(crate) fn jacobian_at(&self, x: &[f64]) -> Matrix {
        Matrix::identity(self.dimension()).sub(&self.objective.hessian_at(x).scale(self.alpha))
    }

    /// Iterates from `x0` until the first stop condition triggers. Checked
    /// at every iterate in this order: gradient tolerance, divergence
    /// radius, box exit, iteration budget.
    pub fn run(&self, x0: &[f64], policy: &StopPolicy) -> Result<Trajectory> {
        check_dim(self.dimension(), x0.len())?;
        if !self.objective.domain_box().contains(x0) {
            return Err(Error::InvalidParameter("initial point lies outside the domain box".into()));
        }
        let mut traj = Trajectory {
            iterates: Vec::new(),
            f_values: Vec::new(),
            grad_norms: Vec::new(),
            stop_reason: StopReason::MaxIters,
            alpha: self.alpha,
        };
        let mut x = x0.to_vec();
        for k in 0.. {
            if !all_finite(&x) {
                return Err(Error::NumericalFailure { iterate: k });
            }
            let f = self.objective.value_at(&x);
            let g = self.objective.gradient_at(&x);
            if !f.is_finite() || !all_finite(&g) {
                return Err(Error::NumericalFailure { iterate: k });
            }
            let gn = norm2(&g);
            let next = step_with_gradient(&x, &g, self.alpha);
            traj.iterates.push(std::mem::replace(&mut x, next));
            traj.f_values.push(f);
            traj.grad_norms.push(gn);
            let current = traj.iterates.last().expect("just pushed");

            let stop = if gn <= policy.tol {
                Some(StopReason::GradNormBelowTol)
            } else if norm2(current) >= policy.divergence_radius {
                Some(StopReason::Diverged)
            } else if !self.objective.domain_box().contains(current) {
                Some(StopReason::LeftDomainBox)
            } else if k >= policy.max_iters {
                Some(StopReason::MaxIters)
            } else {
                None
            };
            if let Some(reason) = stop {
                traj.stop_reason = reason;
                break;
            }
        }
        Ok(traj)
    }
}

fn step_with_gradient(x: &[f64], g: &[f64], alpha: f64) -> Vec<f64> {
    x.iter().zip(g).map(|(xi, gi)| xi - alpha * gi).collect()
}

/// Iterates of one gradient descent run, densely stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub iterates: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub stop_reason: StopReason,
    pub alpha: f64,
}

impl Trajectory {
    /// Number of steps taken (iterates minus one).
    pub fn iterations(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    pub fn final_iterate(&self) -> &[f64] {
        self.iterates.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_grad_norm(&self) -> f64 {
        self.grad_norms.last().copied().unwrap_or(f64::NAN)
    }

    /// CSV with header `k,x_1..x_d,f,grad_norm`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let d = self.iterates.first().map_or(0, Vec::len);
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["k".to_string()];
        header.extend((1..=d).map(|i| format!("x_{i}")));
        header.push("f".into());
        header.push("grad_norm".into());
        out.write_record(&header)?;
        for (k, ((x, f), gn)) in self.iterates.iter().zip(&self.f_values).zip(&self.grad_norms).enumerate() {
            let mut row = vec![k.to_string()];
            row.extend(x.iter().map(f64::to_string));
            row.push(f.to_string());
            row.push(gn.to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Exact k-th iterate of gradient descent on `f(x) = ½ Σ λ_i x_i²`:
/// `x_k = Σ_i (1 − αλ_i)^k ⟨e_i, x0⟩ e_i`.
pub fn closed_form_quadratic(lambdas: &[f64], alpha: f64, x0: &[f64], k: u32) -> Result<Vec<f64>> {
    check_dim(lambdas.len(), x0.len())?;
    let k = i32::try_from(k).map_err(|_| Error::InvalidParameter("iteration count too large".into()))?;
    Ok(lambdas.iter().zip(x0).map(|(l, x)| (1.0 - alpha * l).powi(k) * x).collect())
}
