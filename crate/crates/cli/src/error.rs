use thiserror::Error;

/// Failures of a CLI run, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },
    #[error("this command needs a [{0}] section")]
    MissingSection(&'static str),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] formlab::Error),
}

impl CliError {
    pub fn validation(key: impl Into<String>, reason: impl ToString) -> Self {
        CliError::Validation {
            key: key.into(),
            reason: reason.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(formlab::Error::PrecisionCapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}
