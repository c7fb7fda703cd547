use hilbert_core::Error as CoreError;
use thiserror::Error;

/// CLI failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("geometric degeneracy: {0}")]
    Degenerate(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Argument(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::FewerThanThreeVertices(_)
            | CoreError::NotStrictlyConvex(_)
            | CoreError::DuplicateVertex(_)
            | CoreError::NonFinite
            | CoreError::PointNotInterior(..)
            | CoreError::EmptySiteSet
            | CoreError::DuplicateSites(..)
            | CoreError::TooFewSites { .. } => CliError::Input(msg),
            CoreError::NonpositiveRadius(_) | CoreError::DirectionNotInward | CoreError::ZeroDirection => {
                CliError::Argument(msg)
            }
            CoreError::CoincidentSites
            | CoreError::DegenerateTriple
            | CoreError::GeneralPositionViolation(..)
            | CoreError::SearchDidNotConverge(_) => CliError::Degenerate(msg),
            CoreError::InternalInvariantViolation(_) => CliError::Internal(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
