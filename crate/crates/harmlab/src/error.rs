use std::path::PathBuf;

/// Failures of the front end. Every variant maps to exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
    #[error("unknown grid field `{0}` (expected J, Lambda, lambda, D or lnJ)")]
    UnknownField(String),
    #[error("numerics error: {0}")]
    Numerics(#[from] harmlab_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid option: {0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
