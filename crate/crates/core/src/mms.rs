//! Manufactured-solution test family.
//!
//! The exact solution is `u(x,t) = X(x)·T(t)` with
//! `X(x) = (α+1) + sin(πx) + (α−1)cos(πx)`, `T(t) = t² + t + 1`, and the
//! coefficient is `k(x) = 2 − sin(πx)`. Since `X(0) = 2α` and `X(1) = 2`, the
//! proportionality condition `u(0,t) = α u(1,t)` holds for every α; the
//! source and the flux datum are derived in closed form.

use std::f64::consts::PI;

use crate::caputo::gamma;
use crate::{GridFunction, GridSpec, ProblemSpec, Result};

/// `X(x)`.
pub fn space_profile(alpha: f64, x: f64) -> f64 {
    (alpha + 1.0) + (PI * x).sin() + (alpha - 1.0) * (PI * x).cos()
}

/// `X′(x)`.
pub fn space_profile_dx(alpha: f64, x: f64) -> f64 {
    PI * (PI * x).cos() - (alpha - 1.0) * PI * (PI * x).sin()
}

/// `X″(x)`.
pub fn space_profile_dxx(alpha: f64, x: f64) -> f64 {
    -PI * PI * (PI * x).sin() - (alpha - 1.0) * PI * PI * (PI * x).cos()
}

/// `k(x) = 2 − sin(πx)`.
pub fn coefficient(x: f64) -> f64 {
    2.0 - (PI * x).sin()
}

/// `k′(x)`.
pub fn coefficient_dx(x: f64) -> f64 {
    -PI * (PI * x).cos()
}

/// `T(t) = t² + t + 1`.
pub fn time_factor(t: f64) -> f64 {
    t * t + t + 1.0
}

/// Caputo derivative of `T`: `2t^{2−ν}/Γ(3−ν) + t^{1−ν}/Γ(2−ν)`.
pub fn caputo_time_factor(nu: f64, t: f64) -> f64 {
    2.0 * t.powf(2.0 - nu) / gamma(3.0 - nu) + t.powf(1.0 - nu) / gamma(2.0 - nu)
}

/// `(k X′)′ = k′X′ + kX″`.
fn flux_divergence(alpha: f64, x: f64) -> f64 {
    coefficient_dx(x) * space_profile_dx(alpha, x) + coefficient(x) * space_profile_dxx(alpha, x)
}

/// One member of the family, with the exact solution kept alongside the
/// problem it solves.
#[derive(Debug, Clone)]
pub struct ManufacturedProblem {
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub horizon: f64,
    spec: ProblemSpec,
}

impl ManufacturedProblem {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn exact(&self, x: f64, t: f64) -> f64 {
        space_profile(self.alpha, x) * time_factor(t)
    }

    /// `u_x(x,t)`.
    pub fn exact_dx(&self, x: f64, t: f64) -> f64 {
        space_profile_dx(self.alpha, x) * time_factor(t)
    }

    /// Samples the exact solution at `t_n`.
    pub fn exact_layer(&self, grid: &GridSpec, n: usize) -> GridFunction {
        let t = grid.t(n);
        GridFunction::sample(grid, |x| self.exact(x, t))
    }
}

/// Builds the manufactured problem for `(ν, α, β, γ)` on `[0, T]`.
pub fn make_problem(nu: f64, alpha: f64, beta: f64, gamma: f64, horizon: f64) -> Result<ManufacturedProblem> {
    let spec = ProblemSpec::builder(nu, alpha, beta, gamma, horizon)
        .coefficient(|x, _| coefficient(x), true)
        .source(move |x, t| {
            space_profile(alpha, x) * caputo_time_factor(nu, t) - time_factor(t) * flux_divergence(alpha, x)
        })
        // k(0) = k(1) = 2, X′(0) = π, X′(1) = −π, X(1) = 2
        .boundary(move |t| -2.0 * (PI * (1.0 + beta) + gamma) * time_factor(t))
        .initial(move |x| space_profile(alpha, x))
        .build()?;
    Ok(ManufacturedProblem {
        nu,
        alpha,
        beta,
        gamma,
        horizon,
        spec,
    })
}

/// Exact solution of [`make_problem`] for given α, as a free function.
pub fn exact_solution(alpha: f64) -> impl Fn(f64, f64) -> f64 + Send + Sync + Copy {
    move |x, t| space_profile(alpha, x) * time_factor(t)
}
