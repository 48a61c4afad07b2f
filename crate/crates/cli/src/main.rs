//! `steklov`: convergence studies, single solves and stability checks for
//! the time-fractional Steklov problem.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use steklov::analysis::{classify_stability, StabilityCase};
use steklov::report::{emit_report, format_sci};
use steklov::stepper::advance;
use steklov::study::{run_study, OutputFormat, ProblemKind, StabilityReport};
use steklov::{build_grid, c_norm, error_field, l2_norm, mms};

use config::{resolve, GridArgs, ParamArgs};

#[derive(Parser)]
#[command(name = "steklov", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study over a list of grids.
    Study {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grids: GridArgs,
    },
    /// Solve on one grid and print the final layer.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        /// Spatial intervals.
        #[arg(long = "N", env = "STEKLOV_N", default_value_t = 64)]
        n: usize,
        /// Time steps [default: N].
        #[arg(long = "Nt", env = "STEKLOV_NT")]
        nt: Option<usize>,
    },
    /// Report which stability condition (alpha, beta, gamma) satisfies.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, env = "STEKLOV_ALPHA", allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, env = "STEKLOV_BETA", allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, env = "STEKLOV_GAMMA", allow_hyphen_values = true)]
    gamma: f64,
    /// table or json.
    #[arg(long, env = "STEKLOV_FORMAT", default_value = "table")]
    format: String,
    #[arg(long, env = "STEKLOV_STRICT", num_args = 0..=1, default_missing_value = "true")]
    strict: Option<bool>,
}

/// A failure with its process exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn config(error: anyhow::Error) -> Self {
        Self { code: 2, error }
    }

    fn io(error: anyhow::Error) -> Self {
        Self { code: 1, error }
    }
}

impl From<steklov::Error> for Failure {
    fn from(e: steklov::Error) -> Self {
        use steklov::Error as E;
        let root = match &e {
            E::GridRun { source, .. } => source.as_ref(),
            other => other,
        };
        let code = if e.is_degenerate() {
            3
        } else {
            match root {
                E::InvalidOrder(_)
                | E::InvalidHorizon(_)
                | E::NonPositiveCoefficient { .. }
                | E::InvalidGrid { .. }
                | E::EmptyGridList
                | E::UnequalSteps { .. } => 2,
                _ => 1,
            }
        };
        Self { code, error: e.into() }
    }
}

const NO_GUARANTEE: u8 = 4;

fn write_output(bytes: &[u8], out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::io),
        None => std::io::stdout()
            .write_all(bytes)
            .context("writing to stdout")
            .map_err(Failure::io),
    }
}

fn study(params: &ParamArgs, grids: &GridArgs) -> Result<u8, Failure> {
    let cfg = resolve(params, grids).map_err(Failure::config)?;
    let report = run_study(&cfg.study)?;
    write_output(&emit_report(&report, cfg.study.format), cfg.out.as_deref())?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(if cfg.strict && report.stability.case == StabilityCase::NoGuarantee {
        NO_GUARANTEE
    } else {
        0
    })
}

#[derive(Serialize)]
struct SolveReport {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "Nt")]
    nt: usize,
    t: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    exact: Vec<f64>,
    err_l2: f64,
    err_c: f64,
    stability: StabilityReport,
}

fn solve(params: &ParamArgs, n: usize, nt: Option<usize>) -> Result<u8, Failure> {
    let cfg = resolve(params, &GridArgs::default()).map_err(Failure::config)?;
    let s = &cfg.study;
    let ProblemKind::Mms = s.problem;
    let p = mms::make_problem(s.nu, s.alpha, s.beta, s.gamma, s.horizon)?;
    let grid = build_grid(p.spec(), n, nt.unwrap_or(n))?;
    let history = advance(p.spec(), &grid)?;
    let last = history.last();
    let t = grid.t(grid.nt());
    let z = error_field(last, |x, t| p.exact(x, t), &grid, t);
    let verdict = classify_stability(s.alpha, s.beta, s.gamma);
    let report = SolveReport {
        n: grid.n(),
        nt: grid.nt(),
        t,
        x: (0..grid.nodes()).map(|i| grid.x(i)).collect(),
        y: last.values().to_vec(),
        exact: p.exact_layer(&grid, grid.nt()).into_values(),
        err_l2: l2_norm(&z, &grid),
        err_c: c_norm(&z),
        stability: verdict.into(),
    };

    let bytes = match s.format {
        OutputFormat::Json => {
            let mut v = serde_json::to_vec_pretty(&report).expect("serializable");
            v.push(b'\n');
            v
        }
        OutputFormat::Csv => {
            let mut out = String::from("x,y,exact,error\n");
            for i in 0..report.x.len() {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    report.x[i],
                    format_sci(report.y[i]),
                    format_sci(report.exact[i]),
                    format_sci(report.y[i] - report.exact[i])
                );
            }
            out.into_bytes()
        }
        OutputFormat::Table => {
            let mut out = format!(
                "N = {}, Nt = {}, t = {}: |[z]|_0 = {}, ||z||_C = {}, stability {:?}\n",
                report.n,
                report.nt,
                t,
                format_sci(report.err_l2),
                format_sci(report.err_c),
                verdict.case
            );
            let _ = writeln!(out, "{:<12}{:<16}{:<16}error", "x", "y", "exact");
            for i in 0..report.x.len() {
                let _ = writeln!(
                    out,
                    "{:<12.6}{:<16}{:<16}{}",
                    report.x[i],
                    format_sci(report.y[i]),
                    format_sci(report.exact[i]),
                    format_sci(report.y[i] - report.exact[i])
                );
            }
            out.into_bytes()
        }
    };
    write_output(&bytes, cfg.out.as_deref())?;
    Ok(if cfg.strict && verdict.case == StabilityCase::NoGuarantee {
        NO_GUARANTEE
    } else {
        0
    })
}

fn classify(args: &ClassifyArgs) -> Result<u8, Failure> {
    let verdict = classify_stability(args.alpha, args.beta, args.gamma);
    let report = StabilityReport::from(verdict);
    let text = match args.format.to_ascii_lowercase().as_str() {
        "json" => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        "table" => {
            let mut s = format!("case: {:?}\n", report.case);
            if let (Some(d), Some(a1), Some(b1), Some(g1)) = (report.delta, report.alpha1, report.beta1, report.gamma1)
            {
                let _ = writeln!(s, "delta: {d}\nalpha1: {a1}\nbeta1: {b1}\ngamma1: {g1}");
            }
            s
        }
        other => {
            return Err(Failure::config(anyhow::anyhow!(
                "unknown format {other:?}, expected table or json"
            )))
        }
    };
    write_output(text.as_bytes(), None)?;
    Ok(if args.strict.unwrap_or(false) && !verdict.case.is_guaranteed() {
        NO_GUARANTEE
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Study { params, grids } => study(params, grids),
        Command::Solve { params, n, nt } => solve(params, *n, *nt),
        Command::Classify(args) => classify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
