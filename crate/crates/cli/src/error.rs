use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each tied to one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Input { path: PathBuf, reason: String },

    #[error(transparent)]
    Core(#[from] stirap_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn input(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        CliError::Input {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// 1 for configuration, validation and I/O problems, 2 for an infeasible
    /// pulse design, 3 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(stirap_core::Error::Infeasible { .. }) => 2,
            CliError::Core(stirap_core::Error::Integration { .. }) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let infeasible = CliError::Core(stirap_core::Error::Infeasible {
            time: 3.0,
            ratio: 1.5,
        });
        let numerical = CliError::Core(stirap_core::Error::Integration {
            time: 1.0,
            reason: "x".into(),
        });
        let domain = CliError::Core(stirap_core::Error::Domain("bad".into()));
        assert_eq!(infeasible.exit_code(), 2);
        assert_eq!(numerical.exit_code(), 3);
        assert_eq!(domain.exit_code(), 1);
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
    }
}
