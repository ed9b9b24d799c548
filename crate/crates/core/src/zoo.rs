//! Test objectives with analytic derivatives, known critical points and
//! gradient-Lipschitz bounds certified on a domain box.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::critical::CriticalClass;
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;

/// Closed interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidParameter(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub const UNBOUNDED: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Largest |v| over the interval.
    pub fn max_abs(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest |v| over the interval.
    pub fn min_abs(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    fn finite_part(&self) -> Interval {
        let lo = if self.lo.is_finite() { self.lo } else { (self.hi - 2.0).min(-1.0) };
        let hi = if self.hi.is_finite() { self.hi } else { (lo + 2.0).max(1.0) };
        Interval { lo, hi }
    }
}

// JSON has no infinities: unbounded ends are written as null.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let end = |v: f64| v.is_finite().then_some(v);
        (end(self.lo), end(self.hi)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(Option<f64>, Option<f64>)>::deserialize(d)?;
        Interval::new(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))
            .map_err(serde::de::Error::custom)
    }
}

/// Axis-aligned box, one interval per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainBox(pub Vec<Interval>);

impl DomainBox {
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Ok(Self(vec![Interval::new(lo, hi)?; dim]))
    }

    pub fn unbounded(dim: usize) -> Self {
        Self(vec![Interval::UNBOUNDED; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.0.len() && self.0.iter().zip(x).all(|(iv, &v)| iv.contains(v))
    }

    pub fn is_bounded(&self) -> bool {
        self.0.iter().all(Interval::is_bounded)
    }

    /// `true` when every interval of `self` lies inside the matching one of `outer`.
    pub fn is_subset_of(&self, outer: &DomainBox) -> bool {
        self.dim() == outer.dim()
            && self.0.iter().zip(&outer.0).all(|(a, b)| b.lo <= a.lo && a.hi <= b.hi)
    }

    /// Bounded version of the box used whenever points must be drawn from it:
    /// infinite ends are replaced so each coordinate spans at least `[-1, 1]`.
    pub fn sampling_box(&self) -> DomainBox {
        DomainBox(self.0.iter().map(Interval::finite_part).collect())
    }

    /// Uniform draw from the box. Unbounded coordinates use [`Self::sampling_box`].
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.0
            .iter()
            .map(|iv| {
                let iv = iv.finite_part();
                if iv.lo == iv.hi {
                    iv.lo
                } else {
                    rng.random_range(iv.lo..=iv.hi)
                }
            })
            .collect()
    }
}

/// The shipped objectives.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveKind {
    /// f(x) = ½ Σ λ_i x_i².
    DiagonalQuadratic { lambdas: Vec<f64> },
    /// Same as [`ObjectiveKind::DiagonalQuadratic`] with every λ_i > 0.
    StronglyConvexQuadratic { lambdas: Vec<f64> },
    /// f(x, y) = ½x² + ¼y⁴ − ½y².
    Nesterov,
    /// f(x) = Σ_ij q_ij x_i² x_j².
    QuarticCopositive { q: Matrix },
}

pub const NESTEROV_DEFAULT_HALF_WIDTH: f64 = 2.0;
pub const QUARTIC_DEFAULT_HALF_WIDTH: f64 = 1.0;

/// Expected classification of a critical point known in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownCriticalPoint {
    pub name: String,
    pub location: Vec<f64>,
    pub expected_class: CriticalClass,
}

/// A named objective plus the box on which its Lipschitz bound holds.
/// Parameters are fixed at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObjectiveConfig", into = "ObjectiveConfig")]
pub struct Objective {
    kind: ObjectiveKind,
    domain_box: DomainBox,
}

/// Wire form: `{name, params, domain_box}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveConfig {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_box: Option<DomainBox>,
}

impl Objective {
    pub fn diagonal_quadratic(lambdas: Vec<f64>) -> Result<Self> {
        check_params(&lambdas)?;
        let d = lambdas.len();
        Ok(Self { kind: ObjectiveKind::DiagonalQuadratic { lambdas }, domain_box: DomainBox::unbounded(d) })
    }

    pub fn strongly_convex_quadratic(lambdas: Vec<f64>) -> Result<Self> {
        check_params(&lambdas)?;
        if let Some(bad) = lambdas.iter().find(|&&l| l <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "strongly convex quadratic needs every eigenvalue > 0, got {bad}"
            )));
        }
        let d = lambdas.len();
        Ok(Self {
            kind: ObjectiveKind::StronglyConvexQuadratic { lambdas },
            domain_box: DomainBox::unbounded(d),
        })
    }

    pub fn nesterov() -> Self {
        Self {
            kind: ObjectiveKind::Nesterov,
            domain_box: DomainBox(vec![
                Interval { lo: -NESTEROV_DEFAULT_HALF_WIDTH, hi: NESTEROV_DEFAULT_HALF_WIDTH };
                2
            ]),
        }
    }

    /// Nesterov example on `[-half_width, half_width]²`.
    pub fn nesterov_on(half_width: f64) -> Result<Self> {
        Self::nesterov().with_domain_box(DomainBox::cube(2, -half_width, half_width)?)
    }

    /// `q` is row-major `d × d`.
    pub fn quartic_copositive(q: Matrix) -> Result<Self> {
        if !q.is_square() || q.rows() == 0 {
            return Err(Error::InvalidParameter("quartic needs a non-empty square Q".into()));
        }
        check_params(q.as_slice())?;
        let d = q.rows();
        Ok(Self {
            kind: ObjectiveKind::QuarticCopositive { q },
            domain_box: DomainBox(vec![
                Interval { lo: -QUARTIC_DEFAULT_HALF_WIDTH, hi: QUARTIC_DEFAULT_HALF_WIDTH };
                d
            ]),
        })
    }

    /// Replaces the certification box.
    pub fn with_domain_box(mut self, domain_box: DomainBox) -> Result<Self> {
        check_dim(self.dimension(), domain_box.dim())?;
        self.domain_box = domain_box;
        Ok(self)
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn domain_box(&self) -> &DomainBox {
        &self.domain_box
    }

    pub fn dimension(&self) -> usize {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                lambdas.len()
            }
            ObjectiveKind::Nesterov => 2,
            ObjectiveKind::QuarticCopositive { q } => q.rows(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ObjectiveKind::DiagonalQuadratic { .. } => "diagonal_quadratic",
            ObjectiveKind::StronglyConvexQuadratic { .. } => "strongly_convex_quadratic",
            ObjectiveKind::Nesterov => "nesterov_example",
            ObjectiveKind::QuarticCopositive { .. } => "quartic_copositive",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                lambdas.clone()
            }
            ObjectiveKind::Nesterov => Vec::new(),
            ObjectiveKind::QuarticCopositive { q } => q.as_slice().to_vec(),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.value_at(x))
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.gradient_at(x))
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Matrix> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.hessian_at(x))
    }

    pub(crate) fn value_at(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                0.5 * lambdas.iter().zip(x).map(|(l, v)| l * v * v).sum::<f64>()
            }
            ObjectiveKind::Nesterov => {
                let (a, b) = (x[0], x[1]);
                let b2 = b * b;
                0.5 * a * a + 0.25 * b2 * b2 - 0.5 * b2
            }
            ObjectiveKind::QuarticCopositive { q } => {
                let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
                q.mul_vec(&sq).iter().zip(&sq).map(|(a, b)| a * b).sum()
            }
        }
    }

    pub(crate) fn gradient_at(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                lambdas.iter().zip(x).map(|(l, v)| l * v).collect()
            }
            ObjectiveKind::Nesterov => vec![x[0], x[1] * x[1] * x[1] - x[1]],
            ObjectiveKind::QuarticCopositive { q } => {
                // ∂f/∂x_k = 4 x_k Σ_j s_kj x_j², s = (Q + Qᵀ)/2
                let d = x.len();
                (0..d)
                    .map(|k| {
                        let s: f64 = (0..d).map(|j| 0.5 * (q[(k, j)] + q[(j, k)]) * x[j] * x[j]).sum();
                        4.0 * x[k] * s
                    })
                    .collect()
            }
        }
    }

    pub(crate) fn hessian_at(&self, x: &[f64]) -> Matrix {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                Matrix::from_diag(lambdas)
            }
            ObjectiveKind::Nesterov => Matrix::from_diag(&[1.0, 3.0 * x[1] * x[1] - 1.0]),
            ObjectiveKind::QuarticCopositive { q } => {
                let d = x.len();
                let s = |i: usize, j: usize| 0.5 * (q[(i, j)] + q[(j, i)]);
                let mut h = Matrix::zeros(d, d);
                for k in 0..d {
                    let diag: f64 = (0..d).map(|j| s(k, j) * x[j] * x[j]).sum();
                    h[(k, k)] = 4.0 * diag + 8.0 * s(k, k) * x[k] * x[k];
                    for l in 0..d {
                        if l != k {
                            h[(k, l)] = 8.0 * s(k, l) * x[k] * x[l];
                        }
                    }
                }
                h
            }
        }
    }

    /// Gradient-Lipschitz constant valid on [`Self::domain_box`]. Exact for
    /// the quadratics and the Nesterov example; an upper bound (Hessian row
    /// sums) for the quartic. Infinite when the box is unbounded in a
    /// direction where the Hessian is unbounded.
    pub fn lipschitz_bound(&self) -> f64 {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                lambdas.iter().fold(0.0, |m: f64, l| m.max(l.abs()))
            }
            ObjectiveKind::Nesterov => {
                // Hessian is diag(1, 3y² − 1); sup of |3y² − 1| sits at an end of the y² range
                let y = self.domain_box.0[1];
                let hi = (3.0 * y.max_abs().powi(2) - 1.0).abs();
                let lo = (3.0 * y.min_abs().powi(2) - 1.0).abs();
                1.0_f64.max(hi).max(lo)
            }
            ObjectiveKind::QuarticCopositive { q } => {
                let d = q.rows();
                let r: Vec<f64> = self.domain_box.0.iter().map(Interval::max_abs).collect();
                let s = |i: usize, j: usize| (0.5 * (q[(i, j)] + q[(j, i)])).abs();
                let mut worst = 0.0_f64;
                for k in 0..d {
                    let mut row = 8.0 * s(k, k) * r[k] * r[k];
                    for j in 0..d {
                        if s(k, j) == 0.0 {
                            continue;
                        }
                        row += 4.0 * s(k, j) * r[j] * r[j];
                        if j != k {
                            row += 8.0 * s(k, j) * r[k] * r[j];
                        }
                    }
                    worst = worst.max(row);
                }
                worst
            }
        }
    }

    pub fn known_critical_points(&self) -> Vec<KnownCriticalPoint> {
        match &self.kind {
            ObjectiveKind::DiagonalQuadratic { lambdas } | ObjectiveKind::StronglyConvexQuadratic { lambdas } => {
                let class = if lambdas.contains(&0.0) {
                    CriticalClass::Degenerate
                } else if lambdas.iter().all(|&l| l > 0.0) {
                    CriticalClass::LocalMin
                } else if lambdas.iter().all(|&l| l < 0.0) {
                    CriticalClass::LocalMax
                } else {
                    CriticalClass::StrictSaddle
                };
                vec![KnownCriticalPoint { name: "origin".into(), location: vec![0.0; lambdas.len()], expected_class: class }]
            }
            ObjectiveKind::Nesterov => vec![
                KnownCriticalPoint { name: "z1".into(), location: vec![0.0, 0.0], expected_class: CriticalClass::StrictSaddle },
                KnownCriticalPoint { name: "z2".into(), location: vec![0.0, -1.0], expected_class: CriticalClass::LocalMin },
                KnownCriticalPoint { name: "z3".into(), location: vec![0.0, 1.0], expected_class: CriticalClass::LocalMin },
            ],
            // the Hessian vanishes at the origin for every Q
            ObjectiveKind::QuarticCopositive { q } => vec![KnownCriticalPoint {
                name: "origin".into(),
                location: vec![0.0; q.rows()],
                expected_class: CriticalClass::Degenerate,
            }],
        }
    }

    /// Config form `{name, params, domain_box}`.
    pub fn to_config(&self) -> ObjectiveConfig {
        ObjectiveConfig { name: self.name().to_string(), params: self.params(), domain_box: Some(self.domain_box.clone()) }
    }

    /// Every shipped objective with representative parameters.
    pub fn zoo() -> Vec<Objective> {
        vec![
            Objective::diagonal_quadratic(vec![1.0, -1.0]).unwrap(),
            Objective::diagonal_quadratic(vec![2.0, -0.5]).unwrap(),
            Objective::diagonal_quadratic(vec![3.0, 1.0, -2.0]).unwrap(),
            Objective::nesterov(),
            Objective::quartic_copositive(Matrix::identity(2)).unwrap(),
            Objective::quartic_copositive(Matrix::from_row_major(2, 2, vec![1.0, -0.5, -0.5, 2.0])).unwrap(),
            Objective::strongly_convex_quadratic(vec![1.0, 3.0]).unwrap(),
        ]
    }
}

fn check_params(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("objective needs at least one parameter".into()));
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("objective parameters must be finite".into()));
    }
    Ok(())
}

impl TryFrom<ObjectiveConfig> for Objective {
    type Error = Error;

    fn try_from(cfg: ObjectiveConfig) -> Result<Self> {
        let obj = match cfg.name.as_str() {
            "diagonal_quadratic" => Objective::diagonal_quadratic(cfg.params)?,
            "strongly_convex_quadratic" => Objective::strongly_convex_quadratic(cfg.params)?,
            "nesterov" | "nesterov_example" => {
                if !cfg.params.is_empty() {
                    return Err(Error::InvalidParameter("nesterov_example takes no parameters".into()));
                }
                Objective::nesterov()
            }
            "quartic_copositive" => {
                let n = cfg.params.len();
                let d = (n as f64).sqrt().round() as usize;
                if d * d != n || d == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "quartic_copositive needs d² row-major entries of Q, got {n}"
                    )));
                }
                Objective::quartic_copositive(Matrix::from_row_major(d, d, cfg.params))?
            }
            other => return Err(Error::Parse(format!("unknown objective '{other}'"))),
        };
        match cfg.domain_box {
            Some(b) => obj.with_domain_box(b),
            None => Ok(obj),
        }
    }
}

impl From<Objective> for ObjectiveConfig {
    fn from(o: Objective) -> Self {
        o.to_config()
    }
}

/// Parses `name` or `name:[p1,p2,...]`, e.g. `diagonal_quadratic:[1,-1]`.
impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((name, rest)) => {
                let rest = rest.trim();
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("expected [..] parameter list in '{s}'")))?;
                (name.trim(), parse_list(inner)?)
            }
            None => (s, Vec::new()),
        };
        Objective::try_from(ObjectiveConfig { name: name.to_string(), params, domain_box: None })
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            write!(f, "{}", self.name())
        } else {
            let list: Vec<String> = params.iter().map(f64::to_string).collect();
            write!(f, "{}:[{}]", self.name(), list.join(","))
        }
    }
}

/// Comma-separated floats; empty input gives an empty list.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{}': {e}", t.trim()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nesterov_values() {
        let f = Objective::nesterov();
        assert_eq!(f.value(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(f.value(&[0.0, 1.0]).unwrap(), -0.25);
        assert_eq!(f.gradient(&[0.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(f.gradient(&[1.0, 2.0]).unwrap(), vec![1.0, 6.0]);
        assert_eq!(f.hessian(&[0.0, 0.0]).unwrap(), Matrix::from_diag(&[1.0, -1.0]));
        assert_eq!(f.hessian(&[0.0, -1.0]).unwrap(), Matrix::from_diag(&[1.0, 2.0]));
    }

    #[test]
    fn diagonal_quadratic_values() {
        let f = Objective::diagonal_quadratic(vec![1.0, -1.0]).unwrap();
        assert_eq!(f.value(&[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(f.gradient(&[1.0, 1.0]).unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = Objective::nesterov();
        assert!(matches!(f.value(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
        assert!(f.gradient(&[1.0, 2.0, 3.0]).is_err());
        assert!(f.hessian(&[]).is_err());
    }

    #[test]
    fn lipschitz_bounds() {
        assert_eq!(Objective::diagonal_quadratic(vec![2.0, -0.5]).unwrap().lipschitz_bound(), 2.0);
        assert_eq!(Objective::nesterov().lipschitz_bound(), 11.0);
        let zero = Objective::quartic_copositive(Matrix::zeros(2, 2)).unwrap();
        assert_eq!(zero.lipschitz_bound(), 0.0);
        let quartic_1d = Objective::quartic_copositive(Matrix::from_diag(&[0.25])).unwrap();
        assert_eq!(quartic_1d.lipschitz_bound(), 3.0);
        // y confined to [0.5, 0.6]: 3y² − 1 ranges over [-0.25, 0.08], so the x block dominates
        let narrow = Objective::nesterov()
            .with_domain_box(DomainBox(vec![Interval::new(-1.0, 1.0).unwrap(), Interval::new(0.5, 0.6).unwrap()]))
            .unwrap();
        assert_eq!(narrow.lipschitz_bound(), 1.0);
    }

    #[test]
    fn quartic_hessian_vanishes_at_origin() {
        let f = Objective::quartic_copositive(Matrix::identity(3)).unwrap();
        assert_eq!(f.hessian(&[0.0; 3]).unwrap(), Matrix::zeros(3, 3));
        // Q = I gives Σ x_i⁴
        assert_eq!(f.value(&[1.0, 2.0, 0.0]).unwrap(), 17.0);
        assert_eq!(f.gradient(&[1.0, 2.0, 0.0]).unwrap(), vec![4.0, 32.0, 0.0]);
    }

    #[test]
    fn parse_names_and_params() {
        let f: Objective = "diagonal_quadratic:[1,-1]".parse().unwrap();
        assert_eq!(f.params(), vec![1.0, -1.0]);
        assert_eq!(f.to_string(), "diagonal_quadratic:[1,-1]");
        assert_eq!("nesterov".parse::<Objective>().unwrap(), Objective::nesterov());
        assert_eq!("nesterov_example".parse::<Objective>().unwrap(), Objective::nesterov());
        let q: Objective = "quartic_copositive:[1, 0, 0, 1]".parse().unwrap();
        assert_eq!(q.dimension(), 2);
        assert!("quartic_copositive:[1,2,3]".parse::<Objective>().is_err());
        assert!("strongly_convex_quadratic:[1,-3]".parse::<Objective>().is_err());
        assert!("rosenbrock".parse::<Objective>().is_err());
        assert!("diagonal_quadratic:1,2".parse::<Objective>().is_err());
        assert!("nesterov:[1]".parse::<Objective>().is_err());
    }

    #[test]
    fn json_form_round_trips_with_unbounded_box() {
        let f = Objective::diagonal_quadratic(vec![1.0, -1.0]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"name":"diagonal_quadratic","params":[1.0,-1.0],"domain_box":[[null,null],[null,null]]}"#
        );
        let back: Objective = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        let n: Objective = serde_json::from_str(r#"{"name":"nesterov","domain_box":[[-3,3],[-3,3]]}"#).unwrap();
        assert_eq!(n.lipschitz_bound(), 26.0);
    }

    #[test]
    fn sampling_box_is_bounded() {
        let b = DomainBox::unbounded(2).sampling_box();
        assert!(b.is_bounded());
        assert_eq!(b.0[0], Interval { lo: -1.0, hi: 1.0 });
        let half = DomainBox(vec![Interval::new(3.0, f64::INFINITY).unwrap()]).sampling_box();
        assert_eq!(half.0[0], Interval { lo: 3.0, hi: 5.0 });
    }
}
