use std::path::Path;

/// Failures of a CLI invocation, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, parameters out of range, mismatched operands.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ewkit::Error),
    /// Unreadable, unwritable or malformed files.
    #[error("{path}: {message}")]
    File { path: String, message: String },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn file(path: &Path, message: impl ToString) -> Self {
        Self::File {
            path: path.display().to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Core(_) => 2,
            Self::File { .. } => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
