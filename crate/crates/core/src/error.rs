use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    /// r + b = 0: sender and receivers agree, so no concealment interval exists.
    #[error("degenerate conflict: r+b=0")]
    DegenerateConflict,

    #[error("no sign change of {what} found within [{lower}, {upper}]")]
    BracketFailure {
        what: &'static str,
        lower: f64,
        upper: f64,
    },

    #[error("root finder did not converge after {iterations} iterations (|f| = {residual:e})")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error("no equilibrium found after {iterations} evaluations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("quadrature on [{lower}, {upper}] exceeded its budget (error estimate {abs_error:e})")]
    QuadratureFailure { lower: f64, upper: f64, abs_error: f64 },
}

impl Error {
    /// Short snake_case name of the variant, for tabular status columns.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParam { .. } => "invalid_param",
            Error::DegenerateConflict => "degenerate_conflict",
            Error::BracketFailure { .. } => "bracket_failure",
            Error::RootNotConverged { .. } => "root_not_converged",
            Error::NoConvergence { .. } => "no_convergence",
            Error::QuadratureFailure { .. } => "quadrature_failure",
        }
    }
}
