use std::path::PathBuf;

/// Errors produced by the solver, the verification checks and the I/O layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("velocity node count must be even and at least 2, got {0}")]
    OddNodeCount(usize),

    #[error("speed bound must be positive and finite, got {0}")]
    InvalidSpeedBound(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("moment order must be 0, 1 or 2, got {0}")]
    InvalidMomentOrder(u32),

    #[error("negative chemoattractant density {0} passed to the taxis function")]
    NegativeDensity(f64),

    #[error("CFL violated: time step {dt} exceeds the stable limit {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value {value} at cell {cell}, node {node} after {substep}")]
    NonFinite {
        cell: usize,
        node: usize,
        substep: &'static str,
        value: f64,
    },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that come from floating-point blow-up rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonFinite { .. } | Error::NegativeDensity(_))
    }
}
