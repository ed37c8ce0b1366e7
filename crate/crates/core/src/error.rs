use thiserror::Error;

use crate::formula::ParseError;

/// Errors produced while building frames, evaluating operators or driving
/// the governance layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {0} is outside [0, 1]")]
    DegreeOutOfRange(f64),

    #[error("world-set mismatch: {left} vs {right} worlds")]
    WorldSetMismatch { left: usize, right: usize },

    #[error("unknown standard `{0}`")]
    UnknownStandard(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("relation for standard `{0}` is not crisp")]
    NotCrisp(String),

    #[error("frame schema violation: {0}")]
    Schema(String),

    #[error("relation `{standard}` is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        standard: String,
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("local measure at world `{world}` is not a probability vector (sum {sum})")]
    MeasureNotNormalized { world: String, sum: f64 },

    #[error("no local measure available at world `{0}`")]
    MissingMeasure(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("refinement needs two distinct standards, got `{0}` twice")]
    SameStandard(String),

    #[error("confidence level {0} must lie strictly between 0 and 1")]
    InvalidConfidence(f64),

    #[error("need at least two standards, got {0}")]
    TooFewStandards(usize),

    #[error("epoch {next} does not follow epoch {last}")]
    NonMonotoneEpoch { last: u64, next: u64 },

    #[error("invalid status transition for audit item: {0}")]
    InvalidTransition(String),

    #[error("audit item not found: {0}")]
    UnknownAuditItem(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
