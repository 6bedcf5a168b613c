use std::path::PathBuf;

use thiserror::Error;

/// Input and output failures. Every variant maps to exit code 2; failing
/// checks are not errors and are reported in the analysis report instead.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("unknown scenario `{0}` (try `prequantum list-scenarios`)")]
    UnknownScenario(String),

    #[error("{context}: {source}")]
    Engine {
        context: String,
        #[source]
        source: prequantum_core::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn schema(location: impl Into<String>, message: impl ToString) -> Self {
        CliError::Schema { location: location.into(), message: message.to_string() }
    }

    pub fn engine(context: impl Into<String>, source: prequantum_core::Error) -> Self {
        CliError::Engine { context: context.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
