use std::io;

use anisoperim::Error as CoreError;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or inconsistent norm, domain or flag input.
    #[error("spec error: {0}")]
    Spec(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("{violations} of {samples} sampled cuts violate the bound")]
    Violation { violations: usize, samples: usize },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Violation { .. } => 4,
        }
    }
}

/// Construction and precondition failures are spec errors; the rest are numeric.
pub(crate) fn from_core(e: CoreError) -> CliError {
    match e {
        CoreError::Input(_)
        | CoreError::Unsupported(_)
        | CoreError::Validation { .. }
        | CoreError::Precondition(_)
        | CoreError::Geometry(_)
        | CoreError::Singularity => CliError::Spec(e.to_string()),
        CoreError::Numeric(_) | CoreError::Infeasible(_) | CoreError::Corner { .. } => CliError::Numeric(e.to_string()),
    }
}
