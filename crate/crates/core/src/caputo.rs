//! L2-1σ approximation of the Caputo derivative at `t_{n+σ}`.
//!
//! ```text
//! Δ^ν y(t_{n+σ}) = τ^{1-ν}/Γ(2-ν) · Σ_{s=0}^{n} c_{n-s} (y^{s+1} - y^s)/τ
//! ```
//!
//! The weights `c_s` are assembled from
//!
//! ```text
//! a_0 = σ^{1-ν},  a_l = (l+σ)^{1-ν} - (l-1+σ)^{1-ν},
//! b_l = [(l+σ)^{2-ν} - (l-1+σ)^{2-ν}]/(2-ν) - [(l+σ)^{1-ν} + (l-1+σ)^{1-ν}]/2,
//! ```
//!
//! as `c_0 = a_0` for `n = 0`, and for `n ≥ 1`
//! `c_0 = a_0 + b_1`, `c_s = a_s + b_{s+1} - b_s`, `c_n = a_n - b_n`.

use crate::{Error, Result, SolutionHistory};

/// `Γ(x)` for the arguments the scheme needs (`1-ν`, `2-ν`, `3-ν`).
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

fn check_order(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(nu))
    }
}

/// Weights `c_0 … c_n` for the step from `t_n` to `t_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    level: usize,
    c: Vec<f64>,
    scale: f64,
    tau: f64,
}

impl WeightTable {
    /// The level `n` this table serves.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// `τ^{1-ν}/Γ(2-ν)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `1/(τ^ν Γ(2-ν))`, the factor in front of the difference sum.
    pub fn difference_factor(&self) -> f64 {
        self.scale / self.tau
    }

    /// `κ = c_0/(τ^ν Γ(2-ν))`, the coefficient of `y^{n+1}` in `Δ^ν y`.
    pub fn kappa(&self) -> f64 {
        self.c[0] * self.difference_factor()
    }
}

/// Cache of the `a_l`, `b_l` sequences for a fixed `(ν, σ, τ)`.
///
/// `a_l` and `b_l` depend on `l` alone, so one cache serves every level up
/// to `max_level`.
#[derive(Debug, Clone)]
pub struct L21Sigma {
    nu: f64,
    sigma: f64,
    tau: f64,
    scale: f64,
    a: Vec<f64>,
    // b[0] is unused
    b: Vec<f64>,
}

impl L21Sigma {
    /// Cache for the standard choice `σ = 1 − ν/2`.
    pub fn new(nu: f64, tau: f64, max_level: usize) -> Result<Self> {
        Self::with_sigma(nu, 1.0 - 0.5 * nu, tau, max_level)
    }

    pub fn with_sigma(nu: f64, sigma: f64, tau: f64, max_level: usize) -> Result<Self> {
        check_order(nu)?;
        let p1 = |l: usize| (l as f64 + sigma).powf(1.0 - nu);
        let p2 = |l: usize| (l as f64 + sigma).powf(2.0 - nu);

        let mut a = Vec::with_capacity(max_level + 1);
        let mut b = Vec::with_capacity(max_level + 1);
        a.push(p1(0));
        b.push(0.0);
        let (mut prev1, mut prev2) = (p1(0), p2(0));
        for l in 1..=max_level {
            let (cur1, cur2) = (p1(l), p2(l));
            a.push(cur1 - prev1);
            b.push((cur2 - prev2) / (2.0 - nu) - 0.5 * (cur1 + prev1));
            prev1 = cur1;
            prev2 = cur2;
        }

        Ok(Self {
            nu,
            sigma,
            tau,
            scale: tau.powf(1.0 - nu) / gamma(2.0 - nu),
            a,
            b,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Highest level this cache can serve.
    pub fn max_level(&self) -> usize {
        self.a.len() - 1
    }

    /// Weights for level `n`.
    ///
    /// # Panics
    ///
    /// If `n` exceeds [`max_level`](Self::max_level).
    pub fn weights(&self, n: usize) -> WeightTable {
        assert!(n <= self.max_level(), "level {n} beyond cache size");
        let (a, b) = (&self.a, &self.b);
        let c = if n == 0 {
            vec![a[0]]
        } else {
            let mut c = Vec::with_capacity(n + 1);
            c.push(a[0] + b[1]);
            c.extend((1..n).map(|s| a[s] + b[s + 1] - b[s]));
            c.push(a[n] - b[n]);
            c
        };
        WeightTable {
            level: n,
            c,
            scale: self.scale,
            tau: self.tau,
        }
    }
}

/// Weights for level `n` of the L2-1σ formula with parameters `(ν, σ, τ)`.
pub fn compute_weights(nu: f64, sigma: f64, n: usize, tau: f64) -> Result<WeightTable> {
    Ok(L21Sigma::with_sigma(nu, sigma, tau, n)?.weights(n))
}

/// `Δ^ν` applied to a scalar time series `y^0 … y^{n+1}`.
pub fn caputo_apply_series(series: &[f64], weights: &WeightTable) -> Result<f64> {
    let n = weights.level;
    if series.len() != n + 2 {
        return Err(Error::HistoryMismatch {
            level: n,
            expected: n + 2,
            found: series.len(),
        });
    }
    let sum: f64 = (0..=n).map(|s| weights.c[n - s] * (series[s + 1] - series[s])).sum();
    Ok(weights.difference_factor() * sum)
}

/// `Δ^ν y_i` at `t_{n+σ}` from a history holding layers `0 … n+1`.
pub fn caputo_apply(history: &SolutionHistory, weights: &WeightTable, i: usize) -> Result<f64> {
    let n = weights.level;
    if history.len() != n + 2 {
        return Err(Error::HistoryMismatch {
            level: n,
            expected: n + 2,
            found: history.len(),
        });
    }
    caputo_apply_series(&history.node_series(i), weights)
}
