use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order nu = {0} is outside (0, 1)")]
    InvalidOrder(f64),

    #[error("time horizon T = {0} must be positive and finite")]
    InvalidHorizon(f64),

    #[error("coefficient k must be positive: k({x}, {t}) = {value}")]
    NonPositiveCoefficient { x: f64, t: f64, value: f64 },

    #[error("grid needs N >= 2 and N_T >= 1, got N = {n}, N_T = {nt}")]
    InvalidGrid { n: usize, nt: usize },

    #[error("grid was built for nu = {grid}, problem has nu = {problem}")]
    GridMismatch { grid: f64, problem: f64 },

    #[error("grid function has {found} values, grid needs {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("history holds {found} layers, weights for level {level} need {expected}")]
    HistoryMismatch {
        level: usize,
        expected: usize,
        found: usize,
    },

    #[error(
        "degenerate step system{}: closure denominator {denominator:e} vs row scale {scale:e}",
        level.map(|n| format!(" at level {n}")).unwrap_or_default()
    )]
    DegenerateSystem {
        level: Option<usize>,
        denominator: f64,
        scale: f64,
    },

    #[error("(alpha^2 - 1)(beta^2 - 1) <= 0 for alpha = {alpha}, beta = {beta}: no real delta roots")]
    NoRealRoots { alpha: f64, beta: f64 },

    #[error("alpha = beta = {0}: the delta quadratic is undefined")]
    DegenerateParameters(f64),

    #[error("delta = {delta} collides with a pole of the parameter transform")]
    DegenerateDelta { delta: f64 },

    #[error("invalid error sequence: {0}")]
    InvalidErrorSequence(String),

    #[error("study needs at least one grid")]
    EmptyGridList,

    #[error("grid N = {n}, N_T = {nt} violates h = tau mode")]
    UnequalSteps { n: usize, nt: usize },

    #[error("grid N = {n}, N_T = {nt}: {source}")]
    GridRun {
        n: usize,
        nt: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True when this error, or the error it wraps, is a degenerate step
    /// system.
    pub fn is_degenerate(&self) -> bool {
        match self {
            Error::DegenerateSystem { .. } => true,
            Error::GridRun { source, .. } => source.is_degenerate(),
            _ => false,
        }
    }
}
