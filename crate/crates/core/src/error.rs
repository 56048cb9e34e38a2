use thiserror::Error;

use crate::solver::FitResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("need at least {min} {what}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("column {0} has zero variance")]
    ZeroVarianceColumn(usize),

    #[error("submodel design is rank deficient (reciprocal condition {rcond:.3e})")]
    RankDeficient { rcond: f64 },

    #[error("signal-to-noise ratio must be positive, got {0}")]
    NonPositiveSnr(f64),

    #[error("invalid penalty parameter: {0}")]
    InvalidPenalty(String),

    #[error("lambda must be positive, got {0}")]
    InvalidLambda(f64),

    #[error("coordinate descent did not converge in {max_iter} sweeps")]
    NotConverged {
        max_iter: usize,
        last: Box<FitResult>,
    },

    #[error("path point {index} (lambda = {lambda:.6e}) did not converge")]
    PathNotConverged {
        index: usize,
        lambda: f64,
        source: Box<Error>,
    },

    #[error("lambda grid must be nonempty and strictly descending")]
    BadGrid,

    #[error("path saturated before lambda = {lambda:.6e}: support reached n - 1")]
    Saturated { lambda: f64 },

    #[error("Lasso support is empty at lambda = {0:.6e}")]
    EmptySupport(f64),

    #[error("predictions are (numerically) zero")]
    ZeroPredictions,

    #[error("every |beta_ols| is at or below lambda")]
    AllShrunkToZero,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("closed-form Lasso signs disagree with the supplied sign vector at position {0}")]
    SignMismatch(usize),

    #[error("Monte Carlo norm samples are degenerate")]
    DegenerateSamples,

    #[error("fold count {k} invalid for n = {n}")]
    BadK { n: usize, k: usize },

    #[error("fold {fold} has a single observation; correlation is undefined")]
    BadFoldSizeForAR2 { fold: usize },

    #[error("no usable grid point for the requested metric")]
    AllDegenerate,

    #[error("selection rule {0} is not valid for this grid")]
    InvalidRule(&'static str),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
