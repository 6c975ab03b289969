use std::process::ExitCode;

use thiserror::Error;
use vgl_core::error::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid input: lattice, gauge profile, grids, guards, unreadable files.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical contract did not hold.
    #[error("contract failure: {0}")]
    Contract(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Contract(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Quadrature { .. } | CoreError::ImaginaryResidue { .. } => CliError::Contract(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
