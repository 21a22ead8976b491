use thiserror::Error;

use crate::catalog::Requirement;

pub type Result<T, E = EvalError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("ingestion error at row {row}, column `{column}`: {message}")]
    Ingest {
        row: usize,
        column: String,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("metric `{metric}` requires {} ({})", requirement.code(), requirement.description())]
    MissingRequirement {
        metric: String,
        requirement: Requirement,
    },

    #[error("degenerate kernel bandwidth: all pooled distances are zero")]
    DegenerateBandwidth,

    #[error("cosine distance is undefined for a zero vector (row {row})")]
    ZeroVector { row: usize },

    #[error("duplicate collapse: similarity matrix is singular (pivot {pivot:e} at index {index})")]
    DuplicateCollapse { index: usize, pivot: f64 },

    #[error("{method} did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("objective returned a non-finite value at {iterate:?}")]
    NonFinite { iterate: Vec<f64> },

    #[error("R^2 is undefined: test labels have zero variance in output {output}")]
    ZeroVariance { output: usize },

    #[error("input outside domain: {0}")]
    OutOfDomain(String),

    #[error("config error: {0}")]
    Config(String),

    /// Pre-run validation failures, one line per unmet requirement or problem.
    #[error("config validation failed:\n{}", .issues.iter().map(|i| format!("  - {i}")).collect::<Vec<_>>().join("\n"))]
    Validation { issues: Vec<Issue> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A single reason a configured metric cannot run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub metric: String,
    pub requirement: Option<Requirement>,
    pub detail: String,
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.requirement {
            Some(r) => write!(f, "{}: missing {} ({}): {}", self.metric, r.code(), r.description(), self.detail),
            None => write!(f, "{}: {}", self.metric, self.detail),
        }
    }
}

impl EvalError {
    /// Requirement codes named by this error, if any.
    pub fn requirement_codes(&self) -> Vec<&'static str> {
        match self {
            EvalError::MissingRequirement { requirement, .. } => vec![requirement.code()],
            EvalError::Validation { issues } => issues.iter().filter_map(|i| i.requirement.map(Requirement::code)).collect(),
            _ => Vec::new(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        EvalError::InvalidParameter(msg.into())
    }

    pub(crate) fn missing(metric: impl Into<String>, requirement: Requirement) -> Self {
        EvalError::MissingRequirement {
            metric: metric.into(),
            requirement,
        }
    }
}
