//! Finite-difference solver for the one-dimensional time-fractional diffusion
//! equation
//!
//! ```text
//! ∂^ν_t u = (k(x,t) u_x)_x + f(x,t),   0 < x < 1,  0 < t ≤ T,
//! u(0,t) = α u(1,t),
//! k(1,t) u_x(1,t) = β k(0,t) u_x(0,t) + γ u(1,t) + μ(t),
//! u(x,0) = u₀(x),
//! ```
//!
//! with a Caputo derivative of order ν ∈ (0,1) and Steklov nonlocal boundary
//! conditions of the second kind.
//!
//! Time is discretized with the L2-1σ formula at the off-grid point
//! `t_{n+σ}`, σ = 1 − ν/2, and space with the standard conservative
//! three-point stencil. The scheme is second order in both τ and h.
//!
//! ## Layout
//!
//! - [`problem`], [`grid`], [`norm`]: problem data, meshes, grid functions and
//!   discrete norms.
//! - [`caputo`]: L2-1σ weights and the discrete Caputo operator.
//! - [`stepper`]: per-step assembly, the bordered-tridiagonal solve and the
//!   time loop.
//! - [`analysis`]: stability classification, the δ-transform and
//!   convergence orders.
//! - [`mms`]: the manufactured-solution test family.
//! - [`study`], [`report`]: convergence studies and report serialization.
//!
//! ## Example
//!
//! ```
//! use steklov::{mms, study::{StudyConfig, run_study}};
//!
//! let mut config = StudyConfig::new(0.5, 3.0, 2.0, -5.0, 1.0);
//! config.grids = vec![(20, 20).into(), (40, 40).into()];
//! let report = run_study(&config).unwrap();
//! assert_eq!(report.rows.len(), 2);
//! assert!((report.co_l2[0] - 2.0).abs() < 0.1);
//! # let _ = mms::make_problem;
//! ```

pub mod analysis;
pub mod caputo;
mod error;
pub mod grid;
pub mod mms;
pub mod norm;
pub mod problem;
pub mod report;
pub mod stepper;
pub mod study;
mod tridiag;

pub use error::{Error, Result};
pub use grid::{build_grid, GridFunction, GridSpec, SolutionHistory};
pub use norm::{c_norm, error_field, l2_norm};
pub use problem::ProblemSpec;
