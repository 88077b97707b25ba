use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of an edge list could not be read.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exhaustive enumeration was asked to do more than it is allowed to.
    #[error("refusing to enumerate 2^{edges} backbones (limit is 2^{limit})")]
    TooLarge { edges: usize, limit: usize },

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(format!($($arg)*))
    };
}

pub(crate) use domain;
