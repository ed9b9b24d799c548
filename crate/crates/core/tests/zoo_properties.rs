use gdsaddle::linalg::{dist2, norm2, Matrix};
use gdsaddle::zoo::Objective;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Central-difference step `cbrt(ε) · max(1, |x_i|)`.
fn fd_step(v: f64) -> f64 {
    f64::EPSILON.cbrt() * v.abs().max(1.0)
}

fn fd_gradient(obj: &Objective, x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let h = fd_step(x[i]);
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            (obj.value(&p).unwrap() - obj.value(&m).unwrap()) / (2.0 * h)
        })
        .collect()
}

fn fd_hessian(obj: &Objective, x: &[f64]) -> Matrix {
    let d = x.len();
    let mut h = Matrix::zeros(d, d);
    for j in 0..d {
        let step = fd_step(x[j]);
        let mut p = x.to_vec();
        let mut m = x.to_vec();
        p[j] += step;
        m[j] -= step;
        let gp = obj.gradient(&p).unwrap();
        let gm = obj.gradient(&m).unwrap();
        for i in 0..d {
            h[(i, j)] = (gp[i] - gm[i]) / (2.0 * step);
        }
    }
    h
}

fn interior_points(obj: &Objective, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sb = obj.domain_box().sampling_box();
    // shrink slightly so the finite-difference stencil stays inside the box
    (0..n).map(|_| sb.sample(&mut rng).iter().map(|v| v * 0.999).collect()).collect()
}

#[test]
fn gradient_matches_finite_differences() {
    for obj in Objective::zoo() {
        for x in interior_points(&obj, 100, 1) {
            let g = obj.gradient(&x).unwrap();
            let fd = fd_gradient(&obj, &x);
            let err = dist2(&g, &fd);
            assert!(err <= 1e-5 * norm2(&g).max(1.0), "{obj} at {x:?}: {g:?} vs {fd:?}");
        }
    }
}

#[test]
fn hessian_matches_finite_differences_and_is_symmetric() {
    for obj in Objective::zoo() {
        for x in interior_points(&obj, 100, 2) {
            let h = obj.hessian(&x).unwrap();
            assert!(h.asymmetry() <= 1e-12);
            let fd = fd_hessian(&obj, &x);
            let err = h.sub(&fd).frobenius_norm();
            assert!(err <= 1e-4 * h.frobenius_norm().max(1.0), "{obj} at {x:?}");
        }
    }
}

#[test]
fn sampled_lipschitz_bound_holds() {
    for obj in Objective::zoo() {
        let l = obj.lipschitz_bound();
        assert!(l.is_finite(), "{obj}");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sb = obj.domain_box().sampling_box();
        let mut violations = 0;
        for _ in 0..1000 {
            let x = sb.sample(&mut rng);
            let y = sb.sample(&mut rng);
            let lhs = dist2(&obj.gradient(&x).unwrap(), &obj.gradient(&y).unwrap());
            // one part in 1e12 absorbs rounding when the bound is attained exactly
            if lhs > l * dist2(&x, &y) * (1.0 + 1e-12) {
                violations += 1;
            }
        }
        assert_eq!(violations, 0, "{obj}");
    }
}

#[test]
fn known_critical_points_have_vanishing_gradient() {
    for obj in Objective::zoo() {
        for p in obj.known_critical_points() {
            assert!(norm2(&obj.gradient(&p.location).unwrap()) <= 1e-10, "{obj} {}", p.name);
        }
    }
}

#[test]
fn nesterov_bound_is_attained_on_box_edge() {
    // sup of 3y² − 1 on [−2, 2] is 11, reached at y = ±2
    let obj = Objective::nesterov();
    let h = obj.hessian(&[0.0, 2.0]).unwrap();
    assert_eq!(h[(1, 1)], obj.lipschitz_bound());
}
