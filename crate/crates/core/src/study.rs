//! Convergence studies over a sequence of grids.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{classify_stability, convergence_order, StabilityCase, StabilityVerdict};
use crate::stepper::Stepper;
use crate::{build_grid, c_norm, error_field, l2_norm, mms, Error, ProblemSpec, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSize {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Nt")]
    pub nt: usize,
}

impl From<(usize, usize)> for GridSize {
    fn from((n, nt): (usize, usize)) -> Self {
        Self { n, nt }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L2,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// Which problem family the study solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Mms,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub grids: Vec<GridSize>,
    /// `h = τ` mode: every grid must have `N = N_T`.
    pub equal_steps: bool,
    pub norms: Vec<Norm>,
    pub format: OutputFormat,
    pub problem: ProblemKind,
}

impl StudyConfig {
    /// Manufactured-solution study on `N = N_T ∈ {160, 320, 640}`.
    pub fn new(nu: f64, alpha: f64, beta: f64, gamma: f64, horizon: f64) -> Self {
        Self {
            nu,
            alpha,
            beta,
            gamma,
            horizon,
            grids: [160, 320, 640].iter().map(|&n| (n, n).into()).collect(),
            equal_steps: true,
            norms: vec![Norm::L2, Norm::C],
            format: OutputFormat::Table,
            problem: ProblemKind::Mms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grids.is_empty() {
            return Err(Error::EmptyGridList);
        }
        if self.equal_steps {
            if let Some(g) = self.grids.iter().find(|g| g.n != g.nt) {
                return Err(Error::UnequalSteps { n: g.n, nt: g.nt });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Nt")]
    pub nt: usize,
    pub h: f64,
    pub tau: f64,
    /// `max_n |[zⁿ]|₀`.
    pub err_l2: f64,
    /// `max_{i,n} |z_iⁿ|`.
    pub err_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub case: StabilityCase,
    pub delta: Option<f64>,
    pub alpha1: Option<f64>,
    pub beta1: Option<f64>,
    pub gamma1: Option<f64>,
}

impl From<StabilityVerdict> for StabilityReport {
    fn from(v: StabilityVerdict) -> Self {
        Self {
            case: v.case,
            delta: v.delta,
            alpha1: v.transformed.map(|t| t.alpha1),
            beta1: v.transformed.map(|t| t.beta1),
            gamma1: v.transformed.map(|t| t.gamma1),
        }
    }
}

/// Wall-clock data; excluded from any reproducibility comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub grid_ms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub rows: Vec<GridRow>,
    pub co_l2: Vec<f64>,
    pub co_c: Vec<f64>,
    pub stability: StabilityReport,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl StudyReport {
    /// The report with timing metadata removed.
    pub fn without_timing(&self) -> Self {
        Self {
            timing: None,
            ..self.clone()
        }
    }
}

/// Solves on one grid and returns the error row.
pub fn run_grid(problem: &ProblemSpec, exact: &(dyn Fn(f64, f64) -> f64 + Sync), size: GridSize) -> Result<GridRow> {
    let grid = build_grid(problem, size.n, size.nt)?;
    let mut stepper = Stepper::new(problem.clone(), grid)?;

    let mut err_l2: f64 = 0.0;
    let mut err_c: f64 = 0.0;
    let mut record = |level: usize, y: &crate::GridFunction| {
        let z = error_field(y, exact, &grid, grid.t(level));
        err_l2 = err_l2.max(l2_norm(&z, &grid));
        err_c = err_c.max(c_norm(&z));
    };
    record(0, stepper.history().last());
    while let Some(layer) = stepper.step() {
        let layer = layer?.clone();
        record(stepper.level(), &layer);
    }

    Ok(GridRow {
        n: size.n,
        nt: size.nt,
        h: grid.h(),
        tau: grid.tau(),
        err_l2,
        err_c,
    })
}

/// Runs the configured manufactured-solution study.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    match config.problem {
        ProblemKind::Mms => {
            let p = mms::make_problem(config.nu, config.alpha, config.beta, config.gamma, config.horizon)?;
            let exact = mms::exact_solution(config.alpha);
            run_study_with(config, p.spec(), &exact)
        }
    }
}

/// Runs a study for any problem with a known exact solution.
///
/// Grids are solved concurrently; rows keep the configured order.
pub fn run_study_with(
    config: &StudyConfig,
    problem: &ProblemSpec,
    exact: &(dyn Fn(f64, f64) -> f64 + Sync),
) -> Result<StudyReport> {
    config.validate()?;
    let start = Instant::now();

    let results: Vec<(Result<GridRow>, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .grids
            .iter()
            .map(|&size| {
                scope.spawn(move || {
                    let t0 = Instant::now();
                    let row = run_grid(problem, exact, size);
                    (row, t0.elapsed().as_secs_f64() * 1e3)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("grid worker panicked"))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut grid_ms = Vec::with_capacity(results.len());
    for ((row, ms), size) in results.into_iter().zip(&config.grids) {
        rows.push(row.map_err(|e| Error::GridRun {
            n: size.n,
            nt: size.nt,
            source: Box::new(e),
        })?);
        grid_ms.push(ms);
    }

    let (co_l2, co_c) = if rows.len() >= 2 {
        let l2: Vec<_> = rows.iter().map(|r| (r.h, r.err_l2)).collect();
        let c: Vec<_> = rows.iter().map(|r| (r.h, r.err_c)).collect();
        (convergence_order(&l2)?, convergence_order(&c)?)
    } else {
        (Vec::new(), Vec::new())
    };

    let verdict = classify_stability(problem.alpha(), problem.beta(), problem.gamma());
    let mut warnings = problem.warnings().to_vec();
    if verdict.case == StabilityCase::NoGuarantee {
        warnings.push(format!(
            "(alpha, beta, gamma) = ({}, {}, {}) meets no stability condition; no stability guarantee",
            problem.alpha(),
            problem.beta(),
            problem.gamma()
        ));
    }

    Ok(StudyReport {
        config: config.clone(),
        rows,
        co_l2,
        co_c,
        stability: verdict.into(),
        warnings,
        timing: Some(Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            grid_ms,
        }),
    })
}
