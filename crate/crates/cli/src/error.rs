use std::io;

use ecofire_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("{0}")]
    Model(#[from] CoreError),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn validation(field: &str, reason: String) -> Self {
        CliError::Validation {
            field: field.to_string(),
            reason,
        }
    }

    /// 2 for invalid input, 3 for numerical failure, 1 for i/o.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Io { .. } => 1,
            CliError::Model(e) => match e {
                CoreError::InvalidParameter { .. }
                | CoreError::InvalidArgument { .. }
                | CoreError::DegenerateDiffusion
                | CoreError::VarsigmaOutOfRange { .. }
                | CoreError::CflViolation { .. }
                | CoreError::UnsupportedCompetition { .. } => 2,
                CoreError::HypothesisViolated { .. }
                | CoreError::NoWaveTrain { .. }
                | CoreError::StepFailure { .. }
                | CoreError::SlowDecay { .. }
                | CoreError::NonFinite { .. } => 3,
            },
        }
    }
}
