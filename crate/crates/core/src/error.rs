use thiserror::Error;

/// Errors raised anywhere in the tensor, spectral, bound, sampling and
/// verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("{context}: mode {mode} differs ({left} vs {right})")]
    ModeMismatch {
        context: &'static str,
        mode: usize,
        left: usize,
        right: usize,
    },

    #[error("shape mismatch in {context}: {left} vs {right}")]
    ShapeMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("unfolded size {rows}x{cols} exceeds the limit of {limit} per side")]
    TooLarge { rows: usize, cols: usize, limit: usize },

    #[error("non-finite entry at flat index {0}")]
    NonFinite(usize),

    #[error("tensor is not Hermitian: max deviation {deviation:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("Hermitian eigensolver did not converge")]
    EigenNonConvergence,

    #[error("{function} requires a positive definite argument (lambda_min = {lambda_min:e}, floor = {floor:e})")]
    NotPositiveDefinite {
        function: &'static str,
        lambda_min: f64,
        floor: f64,
    },

    #[error("arguments do not commute: ||XY - YX||_F = {residual:e} (tolerance {tolerance:e})")]
    NonCommuting { residual: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate ensemble: {0}")]
    Degenerate(String),

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("moment condition fails at p = {p}: E s^p = {lhs:e} exceeds p!/2 = {rhs:e}")]
    MomentCondition { p: u32, lhs: f64, rhs: f64 },

    #[error("theorem `{theorem}` cannot be checked on ensemble kind `{kind}`")]
    Incompatible { theorem: String, kind: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
