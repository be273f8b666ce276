use thiserror::Error;

/// Errors surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("SchemaError at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("NormalizationError at {path}: squared norm is {norm_sqr}, expected 1")]
    Normalization { path: String, norm_sqr: f64 },
    #[error("DimensionError at {path}: expected {expected}, found {found}")]
    Dimension {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Computation(#[from] qgames_core::Error),
}

impl CliError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Computation(_) => 2,
            _ => 1,
        }
    }
}
