use thiserror::Error;

/// Errors produced by the estimation and simulation routines.
#[derive(Debug, Error)]
pub enum FlrError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: expected {expected} points, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("eigendecomposition failed to converge (residual norm {residual:e})")]
    NumericFailure { residual: f64 },

    #[error(
        "component {component} is ill-conditioned: eigenvalue {eigenvalue:e} is below \
         {relative_tol:e} times the leading eigenvalue; lower the cut-off"
    )]
    IllConditioned {
        component: usize,
        eigenvalue: f64,
        relative_tol: f64,
    },

    #[error("chi-squared distance diverges: 2 V_n = {two_v:e} >= sigma^2 = {sigma_sq:e}")]
    DivergentDistance { two_v: f64, sigma_sq: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FlrError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FlrError::InvalidArgument(msg.into())
    }

    /// True for errors caused by numerical breakdown rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            FlrError::NumericFailure { .. } | FlrError::IllConditioned { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, FlrError>;
