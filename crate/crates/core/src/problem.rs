//! Continuous problem data.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// `(x, t) -> value`, used for the coefficient `k` and the source `f`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// `t -> value`, used for the boundary datum `μ`.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `x -> value`, used for the initial data `u₀`.
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const PROBE_X_INTERVALS: usize = 128;
const PROBE_T_INTERVALS: usize = 16;
const SYMMETRY_TOL: f64 = 1e-12;

/// The nonlocal boundary value problem on `[0,1] × [0,T]`.
///
/// Immutable once built; cheap to clone (all callables are reference
/// counted) and safe to share across threads.
#[derive(Clone)]
pub struct ProblemSpec {
    nu: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    horizon: f64,
    k: SpaceTimeFn,
    f: SpaceTimeFn,
    mu: TimeFn,
    u0: SpaceFn,
    k_symmetric: bool,
    warnings: Vec<String>,
}

impl ProblemSpec {
    /// Starts a builder with `k ≡ 1`, `f ≡ 0`, `μ ≡ 0` and `u₀ ≡ 0`.
    pub fn builder(nu: f64, alpha: f64, beta: f64, gamma: f64, horizon: f64) -> ProblemBuilder {
        ProblemBuilder {
            nu,
            alpha,
            beta,
            gamma,
            horizon,
            k: Arc::new(|_, _| 1.0),
            f: Arc::new(|_, _| 0.0),
            mu: Arc::new(|_| 0.0),
            u0: Arc::new(|_| 0.0),
            k_symmetric: true,
        }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The time horizon `T`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn k(&self, x: f64, t: f64) -> f64 {
        (self.k)(x, t)
    }

    pub fn f(&self, x: f64, t: f64) -> f64 {
        (self.f)(x, t)
    }

    pub fn mu(&self, t: f64) -> f64 {
        (self.mu)(t)
    }

    pub fn u0(&self, x: f64) -> f64 {
        (self.u0)(x)
    }

    /// Whether `k(x,t) = k(1-x,t)` was asserted *and* held on the probe grid.
    pub fn k_symmetric(&self) -> bool {
        self.k_symmetric
    }

    /// Non-fatal findings from construction, e.g. a failed symmetry probe.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn coefficient_fn(&self) -> &SpaceTimeFn {
        &self.k
    }

    pub(crate) fn source_fn(&self) -> &SpaceTimeFn {
        &self.f
    }

    pub(crate) fn boundary_fn(&self) -> &TimeFn {
        &self.mu
    }

    pub(crate) fn initial_fn(&self) -> &SpaceFn {
        &self.u0
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("nu", &self.nu)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("gamma", &self.gamma)
            .field("horizon", &self.horizon)
            .field("k_symmetric", &self.k_symmetric)
            .field("warnings", &self.warnings)
            .finish_non_exhaustive()
    }
}

pub struct ProblemBuilder {
    nu: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    horizon: f64,
    k: SpaceTimeFn,
    f: SpaceTimeFn,
    mu: TimeFn,
    u0: SpaceFn,
    k_symmetric: bool,
}

impl ProblemBuilder {
    /// Sets the diffusion coefficient. `symmetric` asserts `k(x,t) = k(1-x,t)`;
    /// the claim is probed in [`build`](Self::build).
    pub fn coefficient<K>(mut self, k: K, symmetric: bool) -> Self
    where
        K: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.k = Arc::new(k);
        self.k_symmetric = symmetric;
        self
    }

    pub fn source<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.f = Arc::new(f);
        self
    }

    pub fn boundary<M>(mut self, mu: M) -> Self
    where
        M: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.mu = Arc::new(mu);
        self
    }

    pub fn initial<U>(mut self, u0: U) -> Self
    where
        U: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.u0 = Arc::new(u0);
        self
    }

    /// Validates the parameters and probes `k` on a node/midpoint grid.
    ///
    /// A non-positive `k` is an error. A failed symmetry probe is not: the
    /// problem is built with `k_symmetric = false` and a warning.
    pub fn build(self) -> Result<ProblemSpec> {
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::InvalidOrder(self.nu));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidHorizon(self.horizon));
        }

        let mut warnings = Vec::new();
        let mut asymmetry: f64 = 0.0;
        for jt in 0..=PROBE_T_INTERVALS {
            let t = self.horizon * jt as f64 / PROBE_T_INTERVALS as f64;
            for jx in 0..=PROBE_X_INTERVALS {
                let x = jx as f64 / PROBE_X_INTERVALS as f64;
                let value = (self.k)(x, t);
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::NonPositiveCoefficient { x, t, value });
                }
                asymmetry = asymmetry.max((value - (self.k)(1.0 - x, t)).abs());
            }
        }

        let mut k_symmetric = self.k_symmetric;
        if !k_symmetric {
            warnings.push(
                "coefficient k is not declared symmetric; stability and convergence are not guaranteed".to_string(),
            );
        } else if asymmetry > SYMMETRY_TOL {
            k_symmetric = false;
            warnings.push(format!(
                "coefficient k fails k(x,t) = k(1-x,t) by {asymmetry:.3e}; stability and convergence are not guaranteed"
            ));
        }

        Ok(ProblemSpec {
            nu: self.nu,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            horizon: self.horizon,
            k: self.k,
            f: self.f,
            mu: self.mu,
            u0: self.u0,
            k_symmetric,
            warnings,
        })
    }
}
