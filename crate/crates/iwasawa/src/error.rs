//! Crate-wide error type.

/// Error type shared by all modules.
///
/// `Format` errors correspond to malformed input files (CLI exit code 2);
/// every other variant is a domain error (CLI exit code 1).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: bad JSON shape, unparsable rational, double-specified
    /// bracket, wrong table dimensions.
    #[error("format error: {0}")]
    Format(String),

    /// Vector/matrix dimensions incompatible with the ambient algebra.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A structural invariant (antisymmetry, Jacobi, subalgebra closure, ...)
    /// does not hold for the input.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Input outside the guaranteed domain of an algorithm; the message names
    /// the check that failed.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Iterative solver exhausted its budget.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// A postcondition that should be unreachable failed; signals a bug
    /// upstream rather than bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// Error from a named pipeline stage.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Exit code for the CLI: 2 for format errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format(_) | Error::Json(_) => 2,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
