//! Layered configuration: flags, then `STEKLOV_*` variables, then a flat
//! JSON file, then defaults.
//!
//! clap resolves the first two layers; this module merges in the file.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use steklov::study::{GridSize, Norm, OutputFormat, ProblemKind, StudyConfig};

/// Problem and study settings shared by `study` and `solve`.
#[derive(Debug, Default, Clone, Args)]
pub struct ParamArgs {
    /// Flat key-value JSON file with any of the settings below.
    #[arg(long, env = "STEKLOV_CONFIG", value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Fractional order, 0 < nu < 1.
    #[arg(long, env = "STEKLOV_NU", allow_hyphen_values = true)]
    pub nu: Option<f64>,

    #[arg(long, env = "STEKLOV_ALPHA", allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    #[arg(long, env = "STEKLOV_BETA", allow_hyphen_values = true)]
    pub beta: Option<f64>,

    #[arg(long, env = "STEKLOV_GAMMA", allow_hyphen_values = true)]
    pub gamma: Option<f64>,

    /// Final time [default: 1].
    #[arg(long = "T", env = "STEKLOV_T")]
    pub horizon: Option<f64>,

    /// Problem family [default: mms].
    #[arg(long, env = "STEKLOV_PROBLEM", value_parser = parse_problem)]
    pub problem: Option<ProblemKind>,

    /// Output format: table, csv or json [default: table].
    #[arg(long, env = "STEKLOV_FORMAT", value_parser = parse_format)]
    pub format: Option<OutputFormat>,

    /// Write the report here instead of stdout.
    #[arg(long, env = "STEKLOV_OUT", value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Exit with status 4 when the parameters meet no stability condition.
    #[arg(long, env = "STEKLOV_STRICT", num_args = 0..=1, default_missing_value = "true")]
    pub strict: Option<bool>,
}

/// Study-only settings.
#[derive(Debug, Default, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated grids, each `N` or `NxNT` [default: 160,320,640].
    #[arg(long, env = "STEKLOV_GRIDS")]
    pub grids: Option<String>,

    /// Require h = tau, i.e. N = NT on every grid [default: true].
    #[arg(long, env = "STEKLOV_EQUAL_STEPS", num_args = 0..=1, default_missing_value = "true")]
    pub equal_steps: Option<bool>,

    /// Norms shown in the table: l2, c or both [default: l2,c].
    #[arg(long, env = "STEKLOV_NORMS")]
    pub norms: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    nu: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    grids: Option<GridsValue>,
    equal_steps: Option<bool>,
    norms: Option<NormsValue>,
    format: Option<OutputFormat>,
    problem: Option<ProblemKind>,
    out: Option<PathBuf>,
    strict: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GridsValue {
    Text(String),
    List(Vec<GridEntry>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GridEntry {
    Square(usize),
    Pair([usize; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NormsValue {
    Text(String),
    List(Vec<Norm>),
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub study: StudyConfig,
    pub out: Option<PathBuf>,
    pub strict: bool,
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

pub fn resolve(params: &ParamArgs, grids: &GridArgs) -> Result<Resolved> {
    let file = match &params.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };
    let need = |flag: Option<f64>, file: Option<f64>, name: &str| {
        flag.or(file).ok_or_else(|| {
            anyhow!(
                "missing --{name} (flag, STEKLOV_{} or config file)",
                name.to_uppercase()
            )
        })
    };

    let nu = need(params.nu, file.nu, "nu")?;
    let alpha = need(params.alpha, file.alpha, "alpha")?;
    let beta = need(params.beta, file.beta, "beta")?;
    let gamma = need(params.gamma, file.gamma, "gamma")?;
    let horizon = params.horizon.or(file.horizon).unwrap_or(1.0);

    let mut study = StudyConfig::new(nu, alpha, beta, gamma, horizon);
    match (&grids.grids, file.grids) {
        (Some(s), _) => study.grids = parse_grids(s)?,
        (None, Some(GridsValue::Text(s))) => study.grids = parse_grids(&s)?,
        (None, Some(GridsValue::List(v))) => {
            study.grids = v
                .into_iter()
                .map(|g| match g {
                    GridEntry::Square(n) => GridSize { n, nt: n },
                    GridEntry::Pair([n, nt]) => GridSize { n, nt },
                })
                .collect()
        }
        (None, None) => {}
    }
    if let Some(eq) = grids.equal_steps.or(file.equal_steps) {
        study.equal_steps = eq;
    }
    match (&grids.norms, file.norms) {
        (Some(s), _) => study.norms = parse_norms(s)?,
        (None, Some(NormsValue::Text(s))) => study.norms = parse_norms(&s)?,
        (None, Some(NormsValue::List(v))) => study.norms = v,
        (None, None) => {}
    }
    if study.norms.is_empty() {
        bail!("--norms selects no norm");
    }
    if let Some(f) = params.format.or(file.format) {
        study.format = f;
    }
    if let Some(p) = params.problem.or(file.problem) {
        study.problem = p;
    }

    Ok(Resolved {
        study,
        out: params.out.clone().or(file.out),
        strict: params.strict.or(file.strict).unwrap_or(false),
    })
}

/// Parses `"160,320,640"` or `"40x80,80x160"`.
pub fn parse_grids(s: &str) -> Result<Vec<GridSize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let parse = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad grid entry {t:?}"))
            };
            match t.split_once(['x', 'X']) {
                Some((n, nt)) => Ok(GridSize {
                    n: parse(n)?,
                    nt: parse(nt)?,
                }),
                None => {
                    let n = parse(t)?;
                    Ok(GridSize { n, nt: n })
                }
            }
        })
        .collect()
}

pub fn parse_norms(s: &str) -> Result<Vec<Norm>> {
    let mut out = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let norm = match t.to_ascii_lowercase().as_str() {
            "l2" => Norm::L2,
            "c" => Norm::C,
            _ => bail!("unknown norm {t:?}, expected l2 or c"),
        };
        if !out.contains(&norm) {
            out.push(norm);
        }
    }
    Ok(out)
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "table" => Ok(OutputFormat::Table),
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("unknown format {s:?}, expected table, csv or json")),
    }
}

fn parse_problem(s: &str) -> Result<ProblemKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "mms" => Ok(ProblemKind::Mms),
        _ => Err(format!("unknown problem {s:?}, only mms is available")),
    }
}
