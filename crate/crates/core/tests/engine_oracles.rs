use gdsaddle::critical::spectrum;
use gdsaddle::engine::{closed_form_quadratic, GradientMap, StopPolicy, StopReason};
use gdsaddle::linalg::{dist_inf, dot};
use gdsaddle::zoo::{Objective, ObjectiveKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WINDOW: u32 = 50;

/// x0 whose expanding coordinates are pre-shrunk by `|1 − αλ_i|^-50`, so
/// every coordinate stays at unit scale over the window and absolute
/// errors are meaningful.
fn unit_scale_start(lambdas: &[f64], alpha: f64, rng: &mut impl Rng) -> Vec<f64> {
    lambdas
        .iter()
        .map(|l| {
            let growth = (1.0 - alpha * l).abs().max(1.0).powi(WINDOW as i32);
            rng.random_range(-1.0..=1.0) / growth
        })
        .collect()
}

#[test]
fn run_matches_closed_form_on_every_zoo_quadratic() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for obj in Objective::zoo() {
        let lambdas = match obj.kind() {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                lambdas.clone()
            }
            _ => continue,
        };
        let alpha = 0.5 / obj.lipschitz_bound();
        let map = GradientMap::new(obj.clone(), alpha).unwrap();
        let policy = StopPolicy { tol: 0.0, max_iters: WINDOW as usize, ..StopPolicy::default() };
        for _ in 0..20 {
            let x0 = unit_scale_start(&lambdas, alpha, &mut rng);
            let t = map.run(&x0, &policy).unwrap();
            assert_eq!(t.stop_reason, StopReason::MaxIters);
            for (k, x) in t.iterates.iter().enumerate() {
                let oracle = closed_form_quadratic(&lambdas, alpha, &x0, k as u32).unwrap();
                assert!(dist_inf(x, &oracle) <= 1e-12, "{obj} k={k}");
            }
        }
    }
}

#[test]
fn critical_points_are_fixed_points() {
    for obj in Objective::zoo() {
        let l = obj.lipschitz_bound();
        let map = GradientMap::new(obj.clone(), 0.9 / l).unwrap();
        for p in obj.known_critical_points() {
            let next = map.step(&p.location).unwrap();
            assert!(dist_inf(&next, &p.location) <= f64::EPSILON, "{obj} {}", p.name);
        }
    }
}

#[test]
fn jacobian_spectrum_is_shifted_hessian_spectrum() {
    for obj in Objective::zoo() {
        let alpha = 0.7 / obj.lipschitz_bound();
        let map = GradientMap::new(obj.clone(), alpha).unwrap();
        for p in obj.known_critical_points() {
            let mut expected: Vec<f64> =
                spectrum(&obj.hessian(&p.location).unwrap()).iter().map(|l| 1.0 - alpha * l).collect();
            expected.sort_by(f64::total_cmp);
            let got = spectrum(&map.jacobian(&p.location).unwrap());
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-10, "{obj}");
            }
        }
    }
}

#[test]
fn trajectories_are_bit_reproducible() {
    let map = GradientMap::new(Objective::nesterov(), 0.09).unwrap();
    let a = map.run(&[0.3, -0.01], &StopPolicy::default()).unwrap();
    let b = map.run(&[0.3, -0.01], &StopPolicy::default()).unwrap();
    assert_eq!(a, b);
    for w in a.iterates.windows(2) {
        assert_eq!(map.step(&w[0]).unwrap(), w[1]);
    }
}

fn descent_holds(obj: &Objective, theta: f64, x0: &[f64]) -> Result<(), TestCaseError> {
    let l = obj.lipschitz_bound();
    let alpha = theta / l;
    let map = GradientMap::new(obj.clone(), alpha).unwrap();
    let policy = StopPolicy { max_iters: 2_000, ..StopPolicy::default() };
    let t = map.run(x0, &policy).unwrap();
    let dbox = obj.domain_box();
    for k in 0..t.iterates.len().saturating_sub(1) {
        if !(dbox.contains(&t.iterates[k]) && dbox.contains(&t.iterates[k + 1])) {
            continue;
        }
        let g = obj.gradient(&t.iterates[k]).unwrap();
        let bound = t.f_values[k] - alpha * (1.0 - alpha * l / 2.0) * dot(&g, &g);
        prop_assert!(t.f_values[k + 1] <= bound + 1e-12, "k={} {} > {}", k, t.f_values[k + 1], bound);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nesterov_descent_property(x in -2.0..=2.0f64, y in -2.0..=2.0f64, theta in 0.05..0.99f64) {
        descent_holds(&Objective::nesterov(), theta, &[x, y])?;
    }

    #[test]
    fn quartic_descent_property(x in -1.0..=1.0f64, y in -1.0..=1.0f64, theta in 0.05..0.99f64) {
        let q = gdsaddle::linalg::Matrix::from_row_major(2, 2, vec![1.0, -0.5, -0.5, 2.0]);
        descent_holds(&Objective::quartic_copositive(q).unwrap(), theta, &[x, y])?;
    }

    #[test]
    fn convex_quadratic_descent_property(x in -5.0..=5.0f64, y in -5.0..=5.0f64, theta in 0.05..0.99f64) {
        descent_holds(&Objective::strongly_convex_quadratic(vec![1.0, 3.0]).unwrap(), theta, &[x, y])?;
    }

    #[test]
    fn closed_form_matches_single_steps(l1 in -3.0..3.0f64, l2 in -3.0..3.0f64, x1 in -1.0..1.0f64, x2 in -1.0..1.0f64) {
        let obj = Objective::diagonal_quadratic(vec![l1, l2]).unwrap();
        let alpha = 0.25;
        let map = GradientMap::new_unchecked(obj, alpha);
        let mut x = vec![x1, x2];
        for k in 1..=5u32 {
            x = map.step(&x).unwrap();
            let oracle = closed_form_quadratic(&[l1, l2], alpha, &[x1, x2], k).unwrap();
            prop_assert!(dist_inf(&x, &oracle) <= 1e-14);
        }
    }
}
