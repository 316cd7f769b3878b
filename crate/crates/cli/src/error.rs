use leakbound_core::QifError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Qif(#[from] QifError),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("timed out after {0} s")]
    Timeout(f64),
}

impl CliError {
    /// 3 for resource limits (cell cap, timeout), 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Qif(QifError::SizeOverflow { .. }) | CliError::Timeout(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn parse(path: &str, msg: impl ToString) -> Self {
        CliError::Parse {
            path: path.to_string(),
            msg: msg.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
