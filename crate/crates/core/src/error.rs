use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("iteration limit {iterations} exceeded (last iterate {last}, residual {residual})")]
    MaxIterExceeded {
        iterations: usize,
        last: f64,
        residual: f64,
    },

    #[error("non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate dimensions: n = {n}, m = {m}, p = {p}")]
    Dimension { n: usize, m: usize, p: usize },

    #[error("self-consistent solve failed: {0}")]
    NoConvergence(String),

    #[error("no sign change of F1 - F2 for rho = {rho} on tau in ({lo}, {hi})")]
    BracketFailure { rho: f64, lo: f64, hi: f64 },

    #[error("no perfect-recovery window: alpha = {alpha} <= alpha_c({rho}) = {alpha_c}")]
    NoWindow { rho: f64, alpha: f64, alpha_c: f64 },

    #[error("matrix decomposition failed: {0}")]
    NumericalRankFailure(String),

    #[error("{failed} of {total} trials failed: {first}")]
    TrialFailures {
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
