use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}:{line}: {message}")]
    ConfigSyntax {
        path: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("refusing to emit an empty table")]
    EmptyTable,
    #[error(transparent)]
    Model(#[from] treeqst_core::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
