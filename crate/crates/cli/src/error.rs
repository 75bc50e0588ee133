use std::path::{Path, PathBuf};

use eldershare_core::ethno::EthnoError;
use eldershare_core::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Ethno(#[from] EthnoError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0} verification check(s) failed")]
    Verification(usize),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Ethno(_) => 2,
            CliError::Model(ModelError::NonConvergence { .. }) => 3,
            CliError::Model(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Verification(_) => 1,
        }
    }
}
