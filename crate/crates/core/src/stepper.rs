//! Assembly and solution of one time step, and the time loop.
//!
//! With `Δ^ν y_i = κ y_i^{n+1} + H_i` split into the unknown part and the
//! history part, each step is the linear system
//!
//! - interior rows `i = 1 … N-1`:
//!   `κ y_i − σ (a y_x̄)_{x,i} = φ_i − H_i + (1−σ)(a yⁿ_x̄)_{x,i}`,
//! - the proportionality row `y_0 − α y_N = 0`,
//! - the flux row coupling `y_0, y_1, y_{N-1}, y_N`,
//!
//! with `a_i = k(x_i − h/2, t_{n+σ})` and `φ_i = f(x_i, t_{n+σ})`. It is
//! tridiagonal apart from the two boundary rows, and is solved by two Thomas
//! sweeps plus a scalar closure for `y_N`.

use crate::caputo::{L21Sigma, WeightTable};
use crate::tridiag::Thomas;
use crate::{Error, GridFunction, GridSpec, ProblemSpec, Result, SolutionHistory};

/// Flux-row coefficients of `y_0, y_1, y_{N-1}, y_N` and its right side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxRow {
    pub y0: f64,
    pub y1: f64,
    pub ynm1: f64,
    pub yn: f64,
    pub rhs: f64,
}

/// The linear system for layer `n+1`.
///
/// `sub`, `diag`, `sup`, `rhs` hold interior rows `1 … N-1` at index `i-1`;
/// `sub[0]` multiplies `y_0` and `sup[N-2]` multiplies `y_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSystem {
    pub level: usize,
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Coefficients of `(y_0, y_N)` in the homogeneous proportionality row.
    pub row0: [f64; 2],
    pub flux: FluxRow,
}

impl StepSystem {
    /// Number of space intervals `N`.
    pub fn n(&self) -> usize {
        self.diag.len() + 1
    }

    /// Residuals of every row at `w`, in the order
    /// `[row0, interior 1 … N-1, flux]`.
    pub fn residuals(&self, w: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.row0[0] * w[0] + self.row0[1] * w[n]);
        for r in 0..n - 1 {
            let i = r + 1;
            out.push(self.sub[r] * w[i - 1] + self.diag[r] * w[i] + self.sup[r] * w[i + 1] - self.rhs[r]);
        }
        let f = &self.flux;
        out.push(f.y0 * w[0] + f.y1 * w[1] + f.ynm1 * w[n - 1] + f.yn * w[n] - f.rhs);
        out
    }
}

fn check_inputs(problem: &ProblemSpec, grid: &GridSpec, history: &SolutionHistory) -> Result<()> {
    if grid.nu() != problem.nu() {
        return Err(Error::GridMismatch {
            grid: grid.nu(),
            problem: problem.nu(),
        });
    }
    if history.grid() != grid {
        return Err(Error::LengthMismatch {
            expected: grid.nodes(),
            found: history.grid().nodes(),
        });
    }
    Ok(())
}

/// History part `H_i` of `Δ^ν y_i` for every node.
fn history_term(history: &SolutionHistory, weights: &WeightTable) -> Vec<f64> {
    let n = weights.level();
    let c = weights.c();
    let layers = history.layers();
    let mut acc: Vec<f64> = layers[n].iter().map(|&v| -c[0] * v).collect();
    for s in 0..n {
        let w = c[n - s];
        let (lo, hi) = (&layers[s], &layers[s + 1]);
        for ((a, &y1), &y0) in acc.iter_mut().zip(hi.values()).zip(lo.values()) {
            *a += w * (y1 - y0);
        }
    }
    let g = weights.difference_factor();
    acc.iter_mut().for_each(|a| *a *= g);
    acc
}

/// Builds the system for layer `n+1`, where `n + 1 = history.len()`.
pub fn assemble_step(
    problem: &ProblemSpec,
    grid: &GridSpec,
    history: &SolutionHistory,
    weights: &WeightTable,
) -> Result<StepSystem> {
    check_inputs(problem, grid, history)?;
    let level = weights.level();
    if history.len() != level + 1 {
        return Err(Error::HistoryMismatch {
            level,
            expected: level + 1,
            found: history.len(),
        });
    }

    let n = grid.n();
    let h = grid.h();
    let h2 = h * h;
    let sigma = grid.sigma();
    let t = grid.t_sigma(level);

    let mut a = vec![0.0; n + 1];
    for (i, ai) in a.iter_mut().enumerate().skip(1) {
        *ai = problem.k(grid.x(i) - 0.5 * h, t);
    }
    let phi: Vec<f64> = (0..=n).map(|i| problem.f(grid.x(i), t)).collect();
    let hist = history_term(history, weights);
    let kappa = weights.kappa();
    let y = history.last();

    let mut diag = Vec::with_capacity(n - 1);
    let mut sub = Vec::with_capacity(n - 1);
    let mut sup = Vec::with_capacity(n - 1);
    let mut rhs = Vec::with_capacity(n - 1);
    for i in 1..n {
        let (left, right) = (a[i] / h2, a[i + 1] / h2);
        let d = kappa + sigma * (left + right);
        debug_assert!(d > sigma * (left + right), "interior row {i} lost diagonal dominance");
        diag.push(d);
        sub.push(-sigma * left);
        sup.push(-sigma * right);
        let explicit = right * (y[i + 1] - y[i]) - left * (y[i] - y[i - 1]);
        rhs.push(phi[i] - hist[i] + (1.0 - sigma) * explicit);
    }

    let (alpha, beta, gamma) = (problem.alpha(), problem.beta(), problem.gamma());
    let (a1, an) = (a[1], a[n]);
    let flux = FluxRow {
        y0: beta * kappa + 2.0 * sigma * beta * a1 / h2,
        y1: -2.0 * sigma * beta * a1 / h2,
        ynm1: -2.0 * sigma * an / h2,
        yn: kappa + 2.0 * sigma * an / h2 - 2.0 * sigma * gamma / h,
        rhs: 2.0 / h * problem.mu(t) + phi[n] + beta * phi[0]
            - beta * hist[0]
            - hist[n]
            - 2.0 * (1.0 - sigma) / h2 * (an * (y[n] - y[n - 1]) - beta * a1 * (y[1] - y[0]))
            + 2.0 * (1.0 - sigma) * gamma / h * y[n],
    };

    Ok(StepSystem {
        level,
        diag,
        sub,
        sup,
        rhs,
        row0: [1.0, -alpha],
        flux,
    })
}

/// Solves a step system by parametric sweeps.
///
/// The interior unknowns are written as `p + q·y_N`, where `p` and `q` solve
/// the interior tridiagonal block against `rhs` and against the boundary
/// coupling. Substituting into the flux row leaves one scalar equation.
pub fn solve_step(system: &StepSystem) -> Result<GridFunction> {
    let n = system.n();
    let m = n - 1;
    // y_0 = ratio · y_N
    let ratio = -system.row0[1] / system.row0[0];

    let mut p = system.rhs.clone();
    let mut q = vec![0.0; m];
    q[0] -= system.sub[0] * ratio;
    q[m - 1] -= system.sup[m - 1];

    let lu = Thomas::factor(&system.sub, &system.diag, &system.sup);
    lu.solve(&mut p);
    lu.solve(&mut q);

    let f = &system.flux;
    let terms = [f.y0 * ratio, f.y1 * q[0], f.ynm1 * q[m - 1], f.yn];
    let denominator: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|v| v.abs()).sum();
    if denominator.is_nan() || denominator.abs() < 1e-14 * scale || scale == 0.0 {
        return Err(Error::DegenerateSystem {
            level: Some(system.level),
            denominator,
            scale,
        });
    }
    let yn = (f.rhs - f.y1 * p[0] - f.ynm1 * p[m - 1]) / denominator;

    let mut y = Vec::with_capacity(n + 1);
    y.push(ratio * yn);
    y.extend(p.iter().zip(&q).map(|(pi, qi)| pi + qi * yn));
    y.push(yn);
    Ok(y.into())
}

/// Drives the time loop one level at a time.
#[derive(Debug, Clone)]
pub struct Stepper {
    problem: ProblemSpec,
    grid: GridSpec,
    weights: L21Sigma,
    history: SolutionHistory,
}

impl Stepper {
    /// Starts from `y⁰ = u₀(x_i)`.
    pub fn new(problem: ProblemSpec, grid: GridSpec) -> Result<Self> {
        let initial = GridFunction::sample(&grid, |x| problem.u0(x));
        Self::with_initial(problem, grid, initial)
    }

    /// Starts from an explicit initial layer.
    pub fn with_initial(problem: ProblemSpec, grid: GridSpec, initial: GridFunction) -> Result<Self> {
        let history = SolutionHistory::new(grid, initial)?;
        check_inputs(&problem, &grid, &history)?;
        let weights = L21Sigma::new(problem.nu(), grid.tau(), grid.nt().saturating_sub(1))?;
        Ok(Self {
            problem,
            grid,
            weights,
            history,
        })
    }

    /// Index of the newest computed layer.
    pub fn level(&self) -> usize {
        self.history.len() - 1
    }

    pub fn is_done(&self) -> bool {
        self.level() >= self.grid.nt()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn history(&self) -> &SolutionHistory {
        &self.history
    }

    pub fn into_history(self) -> SolutionHistory {
        self.history
    }

    /// Computes the next layer and returns it; `None` once `N_T` is reached.
    pub fn step(&mut self) -> Option<Result<&GridFunction>> {
        if self.is_done() {
            return None;
        }
        let weights = self.weights.weights(self.level());
        let next = assemble_step(&self.problem, &self.grid, &self.history, &weights)
            .and_then(|system| solve_step(&system))
            .and_then(|layer| self.history.push(layer));
        Some(next.map(|()| self.history.last()))
    }
}

/// Runs the scheme over all `N_T` steps and returns every layer.
pub fn advance(problem: &ProblemSpec, grid: &GridSpec) -> Result<SolutionHistory> {
    let mut stepper = Stepper::new(problem.clone(), *grid)?;
    while let Some(res) = stepper.step() {
        res?;
    }
    Ok(stepper.into_history())
}
