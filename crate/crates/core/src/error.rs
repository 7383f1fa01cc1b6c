use std::path::PathBuf;

use thiserror::Error;

use crate::qbaf::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} must lie in [0, 1], got {value}")]
    Range { what: &'static str, value: f64 },

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),

    #[error("malformed QBAF: {}", join_violations(.0))]
    InvalidQbaf(Vec<Violation>),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("transport error: {0}")]
    Transport(String),

    #[error("parse error: {message}")]
    Parse { message: String, raw: String },

    #[error("{}:{line}: {message}", path.display())]
    Data {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("training interrupted after {completed_steps} steps: {source}")]
    Interrupted {
        completed_steps: usize,
        checkpoint: Box<crate::bsm::TrainState>,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: f64) -> Self {
        Error::Range { what, value }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks that `value` is a finite number in the closed unit interval.
pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::range(what, value))
    }
}
