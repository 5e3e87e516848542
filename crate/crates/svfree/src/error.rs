use std::path::PathBuf;

use crate::picard::ContractionReport;

/// Everything that can go wrong in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inequality violation: lhs = {lhs:e} > 0 but rhs = 0")]
    InequalityViolation { lhs: f64 },

    #[error("flow map degenerate at t = {t}: eta_x in [{min_eta_x:e}, {max_eta_x:e}]")]
    FlowMapDegeneracy {
        t: f64,
        min_eta_x: f64,
        max_eta_x: f64,
    },

    #[error("mass matrix is not positive definite")]
    DegenerateMass,

    #[error("linear solve failed at t = {t}")]
    LinearSolve { t: f64 },

    #[error("Picard iteration did not converge in {} iterations", history.len())]
    NonConvergence { history: Vec<ContractionReport> },

    #[error(
        "eta_x left [1/2, 3/2] (range [{min_eta_x}, {max_eta_x}]); T = {t_final} is too large, try a smaller final time"
    )]
    EtaBound {
        t_final: f64,
        min_eta_x: f64,
        max_eta_x: f64,
    },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code: 2 for solver failures, 3 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_solver_failure() {
            2
        } else if matches!(self, Error::Config { .. } | Error::Json(_) | Error::Validation(_)) {
            3
        } else {
            1
        }
    }

    /// Whether the error came from the nonlinear solver rather than from input handling.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::FlowMapDegeneracy { .. }
                | Error::DegenerateMass
                | Error::LinearSolve { .. }
                | Error::NonConvergence { .. }
                | Error::EtaBound { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
