use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid resonance spec: {0}")]
    InvalidSpec(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid ensemble config: {0}")]
    InvalidEnsemble(String),

    #[error("singular resolvent: the resonance energy coincides with a background level")]
    SingularResolvent,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("calibration needs at least {required} samples, got {got}")]
    Calibration { required: usize, got: usize },

    #[error("quadrature did not converge: value {value:e}, error estimate {abs_error:e}")]
    NoConvergence { value: f64, abs_error: f64 },

    #[error("check not applicable: {0}")]
    Inapplicable(String),

    #[error("cumulative distribution is not monotone near {at}")]
    NonMonotoneCdf { at: f64 },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// The innermost error, skipping context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code: 3 for numerical nonconvergence, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::NoConvergence { .. } | Error::SingularResolvent => 3,
            _ => 2,
        }
    }
}
