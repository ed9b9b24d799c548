//! Sampled check of the Łojasiewicz gradient inequality
//! `‖∇f(x)‖ ≥ m |f(x) − f(x*)|^a` around a critical point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::norm2;
use crate::zoo::Objective;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LojasiewiczCertificate {
    pub a: f64,
    pub m: f64,
    /// Largest `f(x) − f(x*)` among checked samples; the inequality was
    /// tested on `{0 < f − f* ≤ epsilon}` within the ball.
    pub epsilon: f64,
    pub neighborhood_radius: f64,
    pub n_samples: usize,
    /// Samples with `f(x) > f(x*)`, the only ones the inequality constrains.
    pub n_checked: usize,
    pub violations: usize,
    /// Smallest `‖∇f‖ − m (f − f*)^a` over checked samples.
    pub min_margin: f64,
}

impl LojasiewiczCertificate {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Draws `n_samples` points uniformly from the punctured ball of `radius`
/// around `x_star` and counts violations among those above the critical
/// level.
pub fn check_lojasiewicz(
    obj: &Objective,
    x_star: &[f64],
    a: f64,
    m: f64,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<LojasiewiczCertificate> {
    check_dim(obj.dimension(), x_star.len())?;
    if !(0.0..1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!("exponent a must lie in [0, 1), got {a}")));
    }
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("m must be finite and non-negative, got {m}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let f_star = obj.value_at(x_star);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cert = LojasiewiczCertificate {
        a,
        m,
        epsilon: 0.0,
        neighborhood_radius: radius,
        n_samples,
        n_checked: 0,
        violations: 0,
        min_margin: f64::INFINITY,
    };
    let mut drawn = 0;
    while drawn < n_samples {
        let offset: Vec<f64> = (0..x_star.len()).map(|_| rng.random_range(-radius..=radius)).collect();
        let r = norm2(&offset);
        if r > radius || r == 0.0 {
            continue;
        }
        drawn += 1;
        let x: Vec<f64> = x_star.iter().zip(&offset).map(|(c, o)| c + o).collect();
        let gap = obj.value_at(&x) - f_star;
        if !(gap > 0.0) {
            continue;
        }
        cert.n_checked += 1;
        cert.epsilon = cert.epsilon.max(gap);
        let margin = norm2(&obj.gradient_at(&x)) - m * gap.powf(a);
        cert.min_margin = cert.min_margin.min(margin);
        if margin < 0.0 {
            cert.violations += 1;
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_m_is_vacuous() {
        let c = check_lojasiewicz(&Objective::nesterov(), &[0.0, 0.0], 0.5, 0.0, 0.5, 500, 1).unwrap();
        assert_eq!(c.violations, 0);
        assert!(c.n_checked > 0);
    }

    #[test]
    fn oversized_m_fails_at_saddle() {
        let c = check_lojasiewicz(&Objective::nesterov(), &[0.0, 0.0], 0.5, 100.0, 0.5, 2000, 2).unwrap();
        assert!(c.violations > 0);
        assert!(!c.holds());
    }

    #[test]
    fn strongly_convex_certificate() {
        let obj = Objective::strongly_convex_quadratic(vec![1.0, 3.0]).unwrap();
        let c = check_lojasiewicz(&obj, &[0.0, 0.0], 0.5, 2f64.sqrt(), 0.5, 2000, 3).unwrap();
        assert_eq!(c.violations, 0);
        assert_eq!(c.n_checked, 2000);
    }

    #[test]
    fn parameter_validation() {
        let obj = Objective::nesterov();
        assert!(check_lojasiewicz(&obj, &[0.0, 0.0], 1.0, 1.0, 0.5, 10, 1).is_err());
        assert!(check_lojasiewicz(&obj, &[0.0, 0.0], 0.5, -1.0, 0.5, 10, 1).is_err());
        assert!(check_lojasiewicz(&obj, &[0.0, 0.0], 0.5, 1.0, 0.0, 10, 1).is_err());
        assert!(check_lojasiewicz(&obj, &[0.0], 0.5, 1.0, 0.5, 10, 1).is_err());
    }
}
