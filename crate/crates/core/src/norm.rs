//! Discrete norms and error fields.

use crate::{GridFunction, GridSpec};

/// `|[y]|₀ = sqrt(Σ_{i=0}^{N} y_i² h)`.
pub fn l2_norm(y: &GridFunction, grid: &GridSpec) -> f64 {
    (y.iter().map(|v| v * v).sum::<f64>() * grid.h()).sqrt()
}

/// `max_i |y_i|`.
pub fn c_norm(y: &GridFunction) -> f64 {
    y.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `z_i = y_i − exact(x_i, t)`.
pub fn error_field(y: &GridFunction, exact: impl Fn(f64, f64) -> f64, grid: &GridSpec, t: f64) -> GridFunction {
    y.iter()
        .enumerate()
        .map(|(i, v)| v - exact(grid.x(i), t))
        .collect::<Vec<_>>()
        .into()
}
