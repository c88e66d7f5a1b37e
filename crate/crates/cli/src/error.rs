use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tautring::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("self-check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 2 for bad input, 3 for an exhausted time budget, 4 for a broken invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(tautring::Error::Timeout { .. }) => 3,
            CliError::Core(tautring::Error::ExponentOverflow { .. }) | CliError::Check(_) => 4,
            _ => 2,
        }
    }
}
