//! Uniform space/time meshes and the functions living on them.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::{Error, ProblemSpec, Result};

/// Uniform mesh `x_i = i h`, `t_n = n τ` with `h = 1/N`, `τ = T/N_T`.
///
/// Only the counts are stored; `h`, `τ` and `σ` are always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    nt: usize,
    horizon: f64,
    nu: f64,
}

impl GridSpec {
    pub fn new(nu: f64, horizon: f64, n: usize, nt: usize) -> Result<Self> {
        if n < 2 || nt < 1 {
            return Err(Error::InvalidGrid { n, nt });
        }
        if !(nu > 0.0 && nu < 1.0) {
            return Err(Error::InvalidOrder(nu));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidHorizon(horizon));
        }
        Ok(Self { n, nt, horizon, nu })
    }

    /// Number of space subintervals `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of time steps `N_T`.
    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn tau(&self) -> f64 {
        self.horizon / self.nt as f64
    }

    /// `σ = 1 − ν/2`.
    pub fn sigma(&self) -> f64 {
        1.0 - 0.5 * self.nu
    }

    /// Number of nodes, `N + 1`.
    pub fn nodes(&self) -> usize {
        self.n + 1
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub fn t(&self, level: usize) -> f64 {
        level as f64 * self.tau()
    }

    /// `t_{n+σ} = (n + σ) τ`.
    pub fn t_sigma(&self, level: usize) -> f64 {
        (level as f64 + self.sigma()) * self.tau()
    }
}

/// Builds the mesh for `spec` with `N` space and `N_T` time intervals.
pub fn build_grid(spec: &ProblemSpec, n: usize, nt: usize) -> Result<GridSpec> {
    GridSpec::new(spec.nu(), spec.horizon(), n, nt)
}

/// Node values `y_0, …, y_N` of one time layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        Self::new(vec![0.0; grid.nodes()])
    }

    /// Samples `g(x_i)` at every node.
    pub fn sample(grid: &GridSpec, g: impl Fn(f64) -> f64) -> Self {
        Self::new((0..grid.nodes()).map(|i| g(grid.x(i))).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.values.iter()
    }

    /// Fails unless the function has exactly one value per node of `grid`.
    pub fn check_on(&self, grid: &GridSpec) -> Result<()> {
        if self.len() != grid.nodes() {
            return Err(Error::LengthMismatch {
                expected: grid.nodes(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for GridFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl From<Vec<f64>> for GridFunction {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}

/// All layers `y⁰ … yⁿ` computed so far.
///
/// The L2-1σ sum reaches back to the first layer, so nothing is discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHistory {
    grid: GridSpec,
    layers: Vec<GridFunction>,
}

impl SolutionHistory {
    pub fn new(grid: GridSpec, initial: GridFunction) -> Result<Self> {
        initial.check_on(&grid)?;
        Ok(Self {
            grid,
            layers: vec![initial],
        })
    }

    pub fn push(&mut self, layer: GridFunction) -> Result<()> {
        layer.check_on(&self.grid)?;
        self.layers.push(layer);
        Ok(())
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn layers(&self) -> &[GridFunction] {
        &self.layers
    }

    pub fn layer(&self, level: usize) -> &GridFunction {
        &self.layers[level]
    }

    /// The newest layer.
    pub fn last(&self) -> &GridFunction {
        self.layers.last().expect("history always holds layer 0")
    }

    /// Number of stored layers (one more than the newest level index).
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values of node `i` across all stored layers.
    pub fn node_series(&self, i: usize) -> Vec<f64> {
        self.layers.iter().map(|y| y[i]).collect()
    }
}
