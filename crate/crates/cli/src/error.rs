use std::io;

use thiserror::Error;

/// Failures of a subcommand, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad config: {0}")]
    Config(String),
    #[error(transparent)]
    Pipeline(#[from] rauzy::Error),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 1 = a check or oracle run failed, 2 = bad config, 3 = the substitution
    /// failed validation, 4 = internal closure failure.
    pub fn exit_code(&self) -> i32 {
        use rauzy::Error as E;
        match self {
            CliError::Failed(_) | CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Pipeline(e) => match e {
                E::MemoryGuard { .. } | E::CutoffTooSmall { .. } | E::NotInReturnModule(_) => 2,
                E::Parse(_)
                | E::UnknownLetter(_)
                | E::EmptyWord(_)
                | E::DuplicateLetter(_)
                | E::UnsupportedAlphabetSize(_)
                | E::NotPrimitive
                | E::NotUnimodular(_)
                | E::ReducibleCharPoly { .. }
                | E::NotPisot
                | E::IllegalSeed { .. }
                | E::RationalField(_) => 3,
                _ => 4,
            },
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
