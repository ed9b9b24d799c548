//! Settings shared by all subcommands. A `--config` JSON file supplies
//! defaults; explicit flags win.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gdsaddle::engine::{GradientMap, StopPolicy, DEFAULT_THETA};
use gdsaddle::zoo::{parse_list, DomainBox, Interval, Objective};
use serde::Deserialize;

/// `"nesterov"`, `"diagonal_quadratic:[1,-1]"` or a full `{name, params, domain_box}` object.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ObjectiveSpec {
    Short(String),
    Full(Objective),
}

impl ObjectiveSpec {
    pub fn parse_flag(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Ok(Self::Full(serde_json::from_str(s).context("parsing --objective JSON")?))
        } else {
            Ok(Self::Short(s.to_string()))
        }
    }

    fn build(&self) -> Result<Objective> {
        match self {
            Self::Short(s) => Ok(s.parse()?),
            Self::Full(o) => Ok(o.clone()),
        }
    }
}

/// Union of every setting; each subcommand reads the fields it needs.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub objective: Option<ObjectiveSpec>,
    pub domain_box: Option<DomainBox>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub init_box: Option<DomainBox>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub divergence_radius: Option<f64>,
    pub radius: Option<f64>,
    pub grid: Option<usize>,
    pub seeds: Option<usize>,
    pub serial: Option<bool>,
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $(if $top.$f.is_some() { $base.$f = $top.$f; })*
    };
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: Settings) -> Self {
        overlay!(self, flags; objective, domain_box, alpha, theta, x0, y, init_box, trials, seed, tol,
            max_iters, divergence_radius, radius, grid, seeds, serial, out);
        self
    }

    pub fn objective(&self) -> Result<Objective> {
        let Some(spec) = &self.objective else { bail!("--objective is required") };
        let obj = spec.build()?;
        match &self.domain_box {
            Some(b) => Ok(obj.with_domain_box(b.clone())?),
            None => Ok(obj),
        }
    }

    /// `--alpha` as given, otherwise `θ / L` with θ defaulting to 0.99.
    pub fn map(&self, obj: Objective) -> Result<GradientMap> {
        match (self.alpha, self.theta) {
            (Some(_), Some(_)) => bail!("give either --alpha or --theta, not both"),
            (Some(a), None) => Ok(GradientMap::new(obj, a)?),
            (None, t) => Ok(GradientMap::with_theta(obj, t.unwrap_or(DEFAULT_THETA))?),
        }
    }

    pub fn policy(&self) -> StopPolicy {
        let d = StopPolicy::default();
        StopPolicy {
            tol: self.tol.unwrap_or(d.tol),
            divergence_radius: self.divergence_radius.unwrap_or(d.divergence_radius),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

pub fn parse_point(s: &str) -> Result<Vec<f64>> {
    let v = parse_list(s)?;
    if v.is_empty() {
        bail!("empty point");
    }
    if v.iter().any(|c| !c.is_finite()) {
        bail!("point has non-finite coordinates: {s}");
    }
    Ok(v)
}

/// `lo,hi` (one interval for every coordinate, dimension taken from the
/// objective later) or `lo:hi,lo:hi,...`.
#[derive(Debug, Clone)]
pub enum BoxArg {
    Cube(Interval),
    Explicit(DomainBox),
}

impl BoxArg {
    pub fn parse(s: &str) -> Result<Self> {
        if s.contains(':') {
            let ivs = s
                .split(',')
                .map(|part| {
                    let (lo, hi) = part.split_once(':').with_context(|| format!("expected lo:hi, got '{part}'"))?;
                    Ok(Interval::new(lo.trim().parse()?, hi.trim().parse()?)?)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Self::Explicit(DomainBox(ivs)))
        } else {
            match parse_list(s)?.as_slice() {
                [lo, hi] => Ok(Self::Cube(Interval::new(*lo, *hi)?)),
                _ => bail!("box must be 'lo,hi' or 'lo:hi,lo:hi,...', got '{s}'"),
            }
        }
    }

    pub fn resolve(self, dim: usize) -> DomainBox {
        match self {
            Self::Cube(iv) => DomainBox(vec![iv; dim]),
            Self::Explicit(b) => b,
        }
    }
}
