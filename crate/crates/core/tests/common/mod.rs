//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the assembly or solver paths it is used to check.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov::caputo::{caputo_apply, L21Sigma};
use steklov::stepper::StepSystem;
use steklov::{GridFunction, GridSpec, ProblemSpec, SolutionHistory};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            if m != 0.0 {
                let (top, rest) = a.split_at_mut(row);
                for (x, p) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= m * p;
                }
                b[row] -= m * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// The full `(N+1)×(N+1)` matrix and right side of a step system, rows in
/// node order `[row0, interior 1 … N-1, flux]`.
pub fn dense_system(sys: &StepSystem) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = sys.diag.len() + 1;
    let mut a = vec![vec![0.0; n + 1]; n + 1];
    let mut b = vec![0.0; n + 1];
    b[1..n].copy_from_slice(&sys.rhs);
    a[0][0] = sys.row0[0];
    a[0][n] = sys.row0[1];
    for i in 1..n {
        a[i][i - 1] += sys.sub[i - 1];
        a[i][i] += sys.diag[i - 1];
        a[i][i + 1] += sys.sup[i - 1];
    }
    a[n][0] += sys.flux.y0;
    a[n][1] += sys.flux.y1;
    a[n][n - 1] += sys.flux.ynm1;
    a[n][n] += sys.flux.yn;
    b[n] = sys.flux.rhs;
    (a, b)
}

/// Scaled residuals of the scheme written out term by term for the step
/// `n → n+1`, using `caputo_apply` on the history through `n+1`.
///
/// Returns `(residual, sum of |terms|)` per row: the proportionality row,
/// the interior rows, then the flux row.
pub fn literal_residuals_raw(
    problem: &ProblemSpec,
    grid: &GridSpec,
    history: &SolutionHistory,
    n: usize,
) -> Vec<(f64, f64)> {
    let nn = grid.n();
    let h = grid.h();
    let sigma = 1.0 - problem.nu() / 2.0;
    let t = (n as f64 + sigma) * grid.tau();
    let weights = L21Sigma::new(problem.nu(), grid.tau(), n).unwrap().weights(n);

    let mut spliced = SolutionHistory::new(*grid, history.layer(0).clone()).unwrap();
    for s in 1..=n + 1 {
        spliced.push(history.layer(s).clone()).unwrap();
    }
    let delta = |i: usize| caputo_apply(&spliced, &weights, i).unwrap();
    let (old, new) = (history.layer(n), history.layer(n + 1));
    let ys = |i: usize| sigma * new[i] + (1.0 - sigma) * old[i];
    let a = |i: usize| problem.k(i as f64 * h - 0.5 * h, t);
    let phi = |i: usize| problem.f(i as f64 * h, t);

    let mut out = Vec::with_capacity(nn + 1);
    let (alpha, beta, gamma) = (problem.alpha(), problem.beta(), problem.gamma());
    let r0 = new[0] - alpha * new[nn];
    out.push((r0, new[0].abs() + (alpha * new[nn]).abs()));

    for i in 1..nn {
        let right = a(i + 1) * (ys(i + 1) - ys(i)) / (h * h);
        let left = a(i) * (ys(i) - ys(i - 1)) / (h * h);
        let d = delta(i);
        let res = d - (right - left) - phi(i);
        let scale = d.abs() + right.abs() + left.abs() + phi(i).abs();
        out.push((res, scale));
    }

    let terms = [
        beta * delta(0),
        delta(nn),
        2.0 / h * a(nn) * (ys(nn) - ys(nn - 1)) / h,
        -2.0 / h * beta * a(1) * (ys(1) - ys(0)) / h,
        -2.0 / h * gamma * ys(nn),
        -2.0 / h * problem.mu(t),
        -phi(nn),
        -beta * phi(0),
    ];
    let res: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|v| v.abs()).sum();
    out.push((res, scale));
    out
}

/// [`literal_residuals_raw`] as `|residual| / scale` per row.
pub fn literal_residuals(problem: &ProblemSpec, grid: &GridSpec, history: &SolutionHistory, n: usize) -> Vec<f64> {
    literal_residuals_raw(problem, grid, history, n)
        .into_iter()
        .map(|(r, s)| r.abs() / s.max(f64::MIN_POSITIVE))
        .collect()
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Caputo derivative of a smooth `u` with derivative `du` at `t`, by
/// quadrature of `∫_0^t u′(s)(t−s)^{−ν} ds / Γ(1−ν)`.
///
/// The substitution `w = (t−s)^{1−ν}` removes the kernel singularity.
pub fn caputo_by_quadrature(du: &dyn Fn(f64) -> f64, nu: f64, t: f64) -> f64 {
    let p = 1.0 / (1.0 - nu);
    let g = |w: f64| du(t - w.powf(p));
    let integral = integrate(&g, 0.0, t.powf(1.0 - nu), 1e-13) * p;
    integral / gamma_one_minus(nu)
}

/// `Γ(1−ν)` from the Euler integral, independent of the library's Gamma.
pub fn gamma_one_minus(nu: f64) -> f64 {
    // Γ(z) = ∫_0^∞ s^{z-1} e^{-s} ds with z = 2−ν, then Γ(1−ν) = Γ(2−ν)/(1−ν).
    // s = w^q, q = 1/(z−1), gives the smooth integrand q w^q e^{-w^q}; the
    // tail past s = 60 is below 1e-24.
    let z = 2.0 - nu;
    let q = 1.0 / (z - 1.0);
    let f = |w: f64| q * w.powf(q) * (-w.powf(q)).exp();
    let g2 = integrate(&f, 0.0, 60f64.powf(z - 1.0), 1e-14);
    g2 / (1.0 - nu)
}

/// A random strictly positive coefficient `k(x,t)` that is symmetric in `x`.
pub fn random_symmetric_k(rng: &mut impl Rng) -> impl Fn(f64, f64) -> f64 + Send + Sync + Clone + 'static {
    let base = rng.random_range(0.5..3.0);
    let amp = rng.random_range(0.0..0.4) * base;
    let freq = rng.random_range(1..4) as f64;
    let drift = rng.random_range(-0.2..0.2);
    move |x: f64, t: f64| base + amp * (2.0 * std::f64::consts::PI * freq * x).cos() + drift * t * x * (1.0 - x)
}

/// Random smooth `f(x,t)`.
pub fn random_source(rng: &mut impl Rng) -> impl Fn(f64, f64) -> f64 + Send + Sync + Clone + 'static {
    let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    move |x: f64, t: f64| c[0] + c[1] * x + c[2] * (3.0 * x + t).sin() + c[3] * t * t
}

/// Random smooth initial data.
pub fn random_initial(rng: &mut impl Rng) -> impl Fn(f64) -> f64 + Send + Sync + Clone + 'static {
    let c: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
    move |x: f64| c[0] + c[1] * (2.0 * x).cos() + c[2] * x * x
}

/// Random node values on `grid`.
pub fn random_layer(rng: &mut impl Rng, grid: &GridSpec) -> GridFunction {
    GridFunction::new((0..grid.nodes()).map(|_| rng.random_range(-1.0..1.0)).collect())
}
