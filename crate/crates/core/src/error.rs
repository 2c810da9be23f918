use thiserror::Error;

use crate::states::BellKind;

/// Errors reported by state construction, protocol execution and experiment parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate subsystem label {0}")]
    DuplicateLabel(String),

    #[error("unknown subsystem label {0}")]
    UnknownLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("measurement basis is not orthonormal and complete: {0}")]
    InvalidBasis(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no Pauli correction reconstructs the source for resource {resource} and outcome {outcome}")]
    CorrectionNotFound { resource: BellKind, outcome: BellKind },

    #[error("forced outcome {index} has probability {probability:.3e}; cannot condition on it")]
    ImpossibleOutcome { index: usize, probability: f64 },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
