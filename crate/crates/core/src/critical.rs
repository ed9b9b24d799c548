//! Critical point search, second-order classification, and the stable
//! subspace `E_s` of the gradient map's Jacobian.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{GradientMap, StopPolicy, StopReason};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{all_finite, dist_inf, distance_to_affine_span, norm2, norm_inf, symmetric_eigen, Matrix};
use crate::zoo::Objective;

pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;
/// Gradient norm below which [`classify`] accepts a point as critical.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-8;
/// Roots closer than this in the infinity norm are merged.
pub const DEDUP_RADIUS: f64 = 1e-6;
/// Final-iterate distance (infinity norm) at which a grid trajectory counts as
/// converged to the saddle.
pub const STABLE_SET_TOL: f64 = 1e-6;

const NEWTON_MAX_ITERS: usize = 200;
const NEWTON_ESCAPE_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalClass {
    LocalMin,
    LocalMax,
    StrictSaddle,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointRecord {
    pub location: Vec<f64>,
    pub grad_norm: f64,
    /// Ascending.
    pub hessian_eigenvalues: Vec<f64>,
    /// Unit eigenvectors, one per eigenvalue.
    pub hessian_eigenvectors: Vec<Vec<f64>>,
    pub classification: CriticalClass,
    /// λ_min < −degeneracy_tol. Also set for local maxima.
    pub strict_saddle: bool,
    /// Some |λ| ≤ degeneracy_tol.
    pub degenerate: bool,
    /// Number of |λ| ≤ degeneracy_tol directions (Jacobian eigenvalue ≈ 1).
    /// Whether these attract cannot be read off the spectrum.
    pub center_dimension: usize,
    /// Eigenvectors with λ ≥ −degeneracy_tol.
    pub stable_subspace_basis: Vec<Vec<f64>>,
    pub stable_dimension: usize,
    pub degeneracy_tol: f64,
}

impl CriticalPointRecord {
    pub fn dimension(&self) -> usize {
        self.location.len()
    }
}

/// Classification from a Hessian spectrum.
///
/// Local maxima take precedence, then strict saddles (any eigenvalue below
/// `−tol`, even when other directions are flat), then degeneracy.
pub fn class_from_spectrum(eigenvalues: &[f64], tol: f64) -> CriticalClass {
    if eigenvalues.iter().all(|&l| l < -tol) {
        CriticalClass::LocalMax
    } else if eigenvalues.iter().any(|&l| l < -tol) {
        CriticalClass::StrictSaddle
    } else if eigenvalues.iter().any(|&l| l.abs() <= tol) {
        CriticalClass::Degenerate
    } else {
        CriticalClass::LocalMin
    }
}

pub fn classify(obj: &Objective, x: &[f64], degeneracy_tol: f64) -> Result<CriticalPointRecord> {
    classify_with(obj, x, DEFAULT_CRITICAL_TOL, degeneracy_tol)
}

/// Full record for a point whose gradient norm is at most `grad_tol`.
pub fn classify_with(obj: &Objective, x: &[f64], grad_tol: f64, degeneracy_tol: f64) -> Result<CriticalPointRecord> {
    check_dim(obj.dimension(), x.len())?;
    let grad_norm = norm2(&obj.gradient_at(x));
    if !(grad_norm <= grad_tol) {
        return Err(Error::NotCritical { grad_norm, tol: grad_tol });
    }
    let eig = symmetric_eigen(&obj.hessian_at(x));
    let vectors: Vec<Vec<f64>> = (0..eig.values.len()).map(|j| eig.vector(j)).collect();
    let stable_subspace_basis: Vec<Vec<f64>> = eig
        .values
        .iter()
        .zip(&vectors)
        .filter(|(&l, _)| l >= -degeneracy_tol)
        .map(|(_, v)| v.clone())
        .collect();
    let classification = class_from_spectrum(&eig.values, degeneracy_tol);
    let center_dimension = eig.values.iter().filter(|l| l.abs() <= degeneracy_tol).count();
    Ok(CriticalPointRecord {
        location: x.to_vec(),
        grad_norm,
        strict_saddle: eig.values.first().is_some_and(|&l| l < -degeneracy_tol),
        degenerate: center_dimension > 0,
        center_dimension,
        stable_dimension: stable_subspace_basis.len(),
        stable_subspace_basis,
        hessian_eigenvalues: eig.values,
        hessian_eigenvectors: vectors,
        classification,
        degeneracy_tol,
    })
}

/// Eigenpairs of `Dg(x*)` and the stable subspace read from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableSubspace {
    /// Eigenvalues of `Dg(x*) = I − α∇²f(x*)`, ascending.
    pub jacobian_eigenvalues: Vec<f64>,
    pub jacobian_eigenvectors: Vec<Vec<f64>>,
    /// Eigenvectors with Jacobian eigenvalue ≤ 1 + α·degeneracy_tol.
    pub basis: Vec<Vec<f64>>,
}

impl StableSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// `E_s` from an eigendecomposition of the Jacobian itself (not the Hessian
/// spectrum stored in `record`).
pub fn stable_subspace(map: &GradientMap, record: &CriticalPointRecord) -> Result<StableSubspace> {
    check_dim(map.dimension(), record.dimension())?;
    let eig = symmetric_eigen(&map.jacobian_at(&record.location));
    let vectors: Vec<Vec<f64>> = (0..eig.values.len()).map(|j| eig.vector(j)).collect();
    let cutoff = 1.0 + map.alpha() * record.degeneracy_tol;
    let basis = eig.values.iter().zip(&vectors).filter(|(&m, _)| m <= cutoff).map(|(_, v)| v.clone()).collect();
    Ok(StableSubspace { jacobian_eigenvalues: eig.values, jacobian_eigenvectors: vectors, basis })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointSearch {
    /// Sorted lexicographically by location.
    pub records: Vec<CriticalPointRecord>,
    pub n_seeds: usize,
    /// Starts that failed to reach ‖∇f‖ ≤ tol.
    pub dropped: usize,
}

/// Multistart Newton on `∇f = 0` from uniform seeds in the domain box.
///
/// Steps use the Hessian pseudo-inverse so flat directions (the quartic at
/// the origin) do not blow up. After the gradient tolerance is met the
/// iteration keeps polishing until the Newton step stalls, which pulls
/// slowly converging degenerate roots inside the merge radius.
pub fn find_critical_points(obj: &Objective, n_seeds: usize, seed: u64, tol: f64) -> Result<CriticalPointSearch> {
    if n_seeds == 0 {
        return Err(Error::InvalidParameter("n_seeds must be at least 1".into()));
    }
    let domain = obj.domain_box().sampling_box();
    let scale = domain.0.iter().map(|iv| iv.max_abs()).fold(1.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<Vec<f64>> = Vec::new();
    let mut dropped = 0;
    for _ in 0..n_seeds {
        let start = domain.sample(&mut rng);
        match newton_root(obj, start, tol, NEWTON_ESCAPE_FACTOR * scale) {
            Some(root) => {
                let gn = norm2(&obj.gradient_at(&root));
                match roots.iter_mut().find(|r| dist_inf(r, &root) <= DEDUP_RADIUS) {
                    Some(existing) => {
                        if gn < norm2(&obj.gradient_at(existing)) {
                            *existing = root;
                        }
                    }
                    None => roots.push(root),
                }
            }
            None => dropped += 1,
        }
    }
    roots.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    let records = roots
        .iter()
        .map(|r| classify_with(obj, r, tol.max(DEFAULT_CRITICAL_TOL), DEFAULT_DEGENERACY_TOL))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalPointSearch { records, n_seeds, dropped })
}

fn newton_root(obj: &Objective, mut x: Vec<f64>, tol: f64, escape: f64) -> Option<Vec<f64>> {
    for _ in 0..NEWTON_MAX_ITERS {
        let g = obj.gradient_at(&x);
        let gn = norm2(&g);
        if !gn.is_finite() {
            return None;
        }
        if gn == 0.0 {
            return Some(x);
        }
        let eig = symmetric_eigen(&obj.hessian_at(&x));
        let cutoff = 1e-14 * eig.values.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
        let step = eig.pseudo_solve(&g, cutoff);
        let step_norm = norm2(&step);
        if gn <= tol && step_norm <= 1e-12 * norm2(&x).max(1.0) {
            return Some(x);
        }
        if step_norm == 0.0 {
            // gradient lies entirely in the Hessian's null space
            return (gn <= tol).then_some(x);
        }
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi -= si;
        }
        if !all_finite(&x) || norm_inf(&x) > escape {
            return None;
        }
    }
    (norm2(&obj.gradient_at(&x)) <= tol).then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: Vec<f64>,
    pub converged_to_saddle: bool,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableSetSample {
    /// Every grid point inside the ball, in grid order.
    pub grid: Vec<GridPoint>,
    /// Grid points whose trajectory converged to the critical point.
    pub converged: Vec<Vec<f64>>,
    /// Largest distance of a converged point from `x* + E_s`.
    pub max_distance_from_stable_subspace: f64,
    pub grid_spacing: f64,
    pub stable_basis: Vec<Vec<f64>>,
}

/// Runs gradient descent from a `grid × grid` lattice over the square of
/// half-width `radius` around `record.location` (points outside the ball
/// dropped) and keeps the starts that converge back to it.
pub fn sample_local_stable_set(
    map: &GradientMap,
    record: &CriticalPointRecord,
    radius: f64,
    grid: usize,
) -> Result<StableSetSample> {
    sample_local_stable_set_with(map, record, radius, grid, &StopPolicy::default())
}

pub fn sample_local_stable_set_with(
    map: &GradientMap,
    record: &CriticalPointRecord,
    radius: f64,
    grid: usize,
    policy: &StopPolicy,
) -> Result<StableSetSample> {
    if record.dimension() != 2 {
        return Err(Error::InvalidParameter("stable-set sampling is implemented for 2-D objectives only".into()));
    }
    check_dim(map.dimension(), 2)?;
    if !record.strict_saddle {
        return Err(Error::InvalidParameter("stable-set sampling needs a strict saddle record".into()));
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be finite and non-negative, got {radius}")));
    }
    let es = stable_subspace(map, record)?;
    let center = &record.location;
    if radius == 0.0 {
        return Ok(StableSetSample {
            grid: vec![GridPoint { x: center.clone(), converged_to_saddle: true, stop_reason: StopReason::GradNormBelowTol }],
            converged: vec![center.clone()],
            max_distance_from_stable_subspace: 0.0,
            grid_spacing: 0.0,
            stable_basis: es.basis,
        });
    }
    if grid < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points per side".into()));
    }
    let coord = |j: usize| radius * (2.0 * j as f64 / (grid - 1) as f64 - 1.0);
    let offsets: Vec<[f64; 2]> = (0..grid)
        .flat_map(|i| (0..grid).map(move |j| (i, j)))
        .map(|(i, j)| [coord(i), coord(j)])
        .filter(|o| o[0].hypot(o[1]) <= radius)
        .collect();
    let box_ = map.objective().domain_box();
    let run_one = |o: &[f64; 2]| -> Result<GridPoint> {
        let x = vec![center[0] + o[0], center[1] + o[1]];
        if !box_.contains(&x) {
            return Ok(GridPoint { x, converged_to_saddle: false, stop_reason: StopReason::LeftDomainBox });
        }
        let t = map.run(&x, policy)?;
        let hit = t.stop_reason == StopReason::GradNormBelowTol && dist_inf(t.final_iterate(), center) <= STABLE_SET_TOL;
        Ok(GridPoint { x, converged_to_saddle: hit, stop_reason: t.stop_reason })
    };
    #[cfg(feature = "parallel")]
    let points: Vec<GridPoint> = {
        use rayon::prelude::*;
        offsets.par_iter().map(run_one).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let points: Vec<GridPoint> = offsets.iter().map(run_one).collect::<Result<_>>()?;

    let converged: Vec<Vec<f64>> = points.iter().filter(|p| p.converged_to_saddle).map(|p| p.x.clone()).collect();
    let max_distance = converged
        .iter()
        .map(|x| distance_to_affine_span(x, center, &es.basis))
        .fold(0.0, f64::max);
    Ok(StableSetSample {
        grid: points,
        converged,
        max_distance_from_stable_subspace: max_distance,
        grid_spacing: 2.0 * radius / (grid - 1) as f64,
        stable_basis: es.basis,
    })
}

/// Classified records for the objective's closed-form critical points.
pub fn classify_known(obj: &Objective) -> Result<Vec<CriticalPointRecord>> {
    obj.known_critical_points()
        .iter()
        .map(|p| classify(obj, &p.location, DEFAULT_DEGENERACY_TOL))
        .collect()
}

/// Eigenvalues of `A` via the crate's Jacobi solver; convenience for checks.
pub fn spectrum(a: &Matrix) -> Vec<f64> {
    symmetric_eigen(a).values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_classes() {
        let t = DEFAULT_DEGENERACY_TOL;
        assert_eq!(class_from_spectrum(&[1.0, 2.0], t), CriticalClass::LocalMin);
        assert_eq!(class_from_spectrum(&[-1.0, 1.0], t), CriticalClass::StrictSaddle);
        assert_eq!(class_from_spectrum(&[-2.0, -1.0], t), CriticalClass::LocalMax);
        assert_eq!(class_from_spectrum(&[0.0, 0.0], t), CriticalClass::Degenerate);
        assert_eq!(class_from_spectrum(&[0.0, 1.0], t), CriticalClass::Degenerate);
        // a negative direction makes it a strict saddle even with a flat one
        assert_eq!(class_from_spectrum(&[-1.0, 0.0], t), CriticalClass::StrictSaddle);
    }

    #[test]
    fn nesterov_saddle_record() {
        let r = classify(&Objective::nesterov(), &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.classification, CriticalClass::StrictSaddle);
        assert!(r.strict_saddle && !r.degenerate);
        assert_eq!(r.hessian_eigenvalues, vec![-1.0, 1.0]);
        assert_eq!(r.stable_dimension, 1);
        assert_eq!(r.stable_subspace_basis, vec![vec![1.0, 0.0]]);
    }

    #[test]
    fn nesterov_minimum_and_quartic_origin() {
        let r = classify(&Objective::nesterov(), &[0.0, -1.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.classification, CriticalClass::LocalMin);
        assert_eq!(r.hessian_eigenvalues, vec![1.0, 2.0]);
        assert_eq!(r.stable_dimension, 2);
        let q = Objective::quartic_copositive(Matrix::identity(2)).unwrap();
        let r = classify(&q, &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.classification, CriticalClass::Degenerate);
        assert_eq!(r.center_dimension, 2);
    }

    #[test]
    fn non_critical_point_is_rejected() {
        let e = classify(&Objective::nesterov(), &[0.5, 0.5], DEFAULT_DEGENERACY_TOL);
        assert!(matches!(e, Err(Error::NotCritical { .. })));
    }

    #[test]
    fn local_max_carries_saddle_flag() {
        let obj = Objective::diagonal_quadratic(vec![-1.0, -2.0]).unwrap();
        let r = classify(&obj, &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.classification, CriticalClass::LocalMax);
        assert!(r.strict_saddle);
        assert_eq!(r.stable_dimension, 0);
    }

    #[test]
    fn jacobian_stable_subspace() {
        let map = GradientMap::new(Objective::nesterov_on(1.9).unwrap(), 0.1).unwrap();
        let r = classify(map.objective(), &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        let es = stable_subspace(&map, &r).unwrap();
        assert!((es.jacobian_eigenvalues[0] - 0.9).abs() < 1e-15);
        assert!((es.jacobian_eigenvalues[1] - 1.1).abs() < 1e-15);
        assert_eq!(es.basis, vec![vec![1.0, 0.0]]);
        let quad = GradientMap::new(Objective::diagonal_quadratic(vec![1.0, -1.0]).unwrap(), 0.5).unwrap();
        let r = classify(quad.objective(), &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(stable_subspace(&quad, &r).unwrap().basis, vec![vec![1.0, 0.0]]);
        let min = classify(map.objective(), &[0.0, 1.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(stable_subspace(&map, &min).unwrap().dimension(), 2);
    }

    #[test]
    fn multistart_finds_nesterov_points() {
        let s = find_critical_points(&Objective::nesterov(), 100, 1, 1e-10).unwrap();
        let locs: Vec<Vec<f64>> = s.records.iter().map(|r| r.location.clone()).collect();
        assert_eq!(locs.len(), 3, "{locs:?}");
        for (found, want) in locs.iter().zip([[0.0, -1.0], [0.0, 0.0], [0.0, 1.0]]) {
            assert!(dist_inf(found, &want) < 1e-12);
        }
    }

    #[test]
    fn multistart_quadratic_and_quartic() {
        let s = find_critical_points(&Objective::diagonal_quadratic(vec![2.0, -3.0]).unwrap(), 20, 2, 1e-10).unwrap();
        assert_eq!(s.records.len(), 1);
        assert!(norm_inf(&s.records[0].location) < 1e-12);
        let q = Objective::quartic_copositive(Matrix::identity(3)).unwrap();
        let s = find_critical_points(&q, 30, 4, 1e-10).unwrap();
        assert_eq!(s.records.len(), 1);
        assert!(norm_inf(&s.records[0].location) <= DEDUP_RADIUS);
        assert_eq!(s.records[0].classification, CriticalClass::Degenerate);
        assert!(find_critical_points(&q, 0, 4, 1e-10).is_err());
    }

    #[test]
    fn stable_set_zero_radius_is_the_point() {
        let map = GradientMap::new(Objective::nesterov_on(1.9).unwrap(), 0.1).unwrap();
        let r = classify(map.objective(), &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        let s = sample_local_stable_set(&map, &r, 0.0, 41).unwrap();
        assert_eq!(s.converged, vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn stable_set_rejects_minimum() {
        let map = GradientMap::new(Objective::nesterov_on(1.9).unwrap(), 0.1).unwrap();
        let r = classify(map.objective(), &[0.0, 1.0], DEFAULT_DEGENERACY_TOL).unwrap();
        assert!(sample_local_stable_set(&map, &r, 0.5, 11).is_err());
    }

    #[test]
    fn quadratic_stable_set_is_the_axis() {
        let map = GradientMap::new(Objective::diagonal_quadratic(vec![1.0, -1.0]).unwrap(), 0.5).unwrap();
        let r = classify(map.objective(), &[0.0, 0.0], DEFAULT_DEGENERACY_TOL).unwrap();
        let s = sample_local_stable_set(&map, &r, 1.0, 21).unwrap();
        let expected: Vec<Vec<f64>> = (0..21)
            .map(|i| vec![2.0 * i as f64 / 20.0 - 1.0, 0.0])
            .collect();
        assert_eq!(s.converged, expected);
        assert_eq!(s.max_distance_from_stable_subspace, 0.0);
    }
}
