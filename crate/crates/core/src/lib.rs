//! Gradient descent around strict saddles.
//!
//! The crate ships a small zoo of objectives with exact derivatives
//! ([`zoo`]), the gradient map and its iteration ([`engine`]), the
//! proximal-point inverse of that map ([`inverse`]), critical point
//! classification with the Jacobian's stable subspace ([`critical`]), and
//! Monte Carlo and rate experiments ([`experiments`]).
//!
//! ```
//! use gdsaddle::{engine::{GradientMap, StopPolicy}, zoo::Objective};
//!
//! let map = GradientMap::new(Objective::nesterov(), 0.09).unwrap();
//! let traj = map.run(&[0.5, 0.3], &StopPolicy::default()).unwrap();
//! let last = traj.final_iterate();
//! assert!((last[1] - 1.0).abs() < 1e-9);
//! ```

// `!(x <= tol)` is deliberate throughout: NaN must take the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod inverse;
pub mod linalg;
pub mod zoo;

pub use error::{Error, Result};
