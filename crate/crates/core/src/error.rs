use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a documented invariant. `field` names the offending
    /// field using a dotted/indexed path such as `world.obstacles[3]`.
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },

    #[error("{what} {value} out of range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("free space too small: {rejections} consecutive rejected samples")]
    FreeSpaceTooSmall { rejections: usize },

    #[error("infeasible: team size {team_size} exceeds {candidates} candidates")]
    Infeasible { team_size: usize, candidates: usize },

    #[error("brute force refused: C({n}, {k}) = {subsets} subsets exceeds limit {limit}")]
    OracleLimit {
        n: usize,
        k: usize,
        subsets: u128,
        limit: u64,
    },

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scenario {path}: at `{field}`: {source}")]
    Parse {
        path: PathBuf,
        field: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Prefixes the field path of an [`Error::Invalid`] with `prefix`.
    pub fn within(self, prefix: &str) -> Self {
        match self {
            Error::Invalid { field, message } => Error::Invalid {
                field: format!("{prefix}.{field}"),
                message,
            },
            other => other,
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }
}
