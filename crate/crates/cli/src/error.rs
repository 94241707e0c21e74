use std::path::PathBuf;

use paramech_core::Error as CoreError;
use thiserror::Error;

use crate::scenario::ScenarioError;

pub const EXIT_OK: u8 = 0;
/// The identity audit reported a failing record.
pub const EXIT_AUDIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_SINGULAR: u8 = 3;
pub const EXIT_NON_CONVERGENCE: u8 = 4;
pub const EXIT_IO: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Scenario(#[from] ScenarioError),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Scenario(_) | CliError::Usage(_) => EXIT_INVALID,
            CliError::Io { .. } => EXIT_IO,
            CliError::Core(e) => match e {
                CoreError::SingularHessian { .. } | CoreError::SingularForm | CoreError::SingularPoint { .. } => {
                    EXIT_SINGULAR
                }
                CoreError::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
                CoreError::DimensionMismatch { .. }
                | CoreError::InvalidArgument(_)
                | CoreError::DegreeOverflow(_)
                | CoreError::WrongStructureKind { .. } => EXIT_INVALID,
            },
        }
    }
}
