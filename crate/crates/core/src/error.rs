//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across ingestion, weighting, training,
/// statistics and the cross-validation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("label `{value}` at data row {row} is not 0 or 1")]
    NonBinaryLabel { row: usize, value: String },

    #[error("non-finite value at data row {row}, column `{column}`")]
    NonFiniteValue { row: usize, column: String },

    #[error("unparseable number `{value}` at data row {row}, column `{column}`")]
    InvalidNumber {
        row: usize,
        column: String,
        value: String,
    },

    #[error("modality prefix `{0}` matched no feature columns")]
    EmptyModality(String),

    #[error("column `{0}` matches no declared modality prefix")]
    UnmappedColumn(String),

    #[error("unknown modality `{0}`")]
    UnknownModality(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sample weights are all zero")]
    AllZeroWeights,

    #[error("invalid sample weights: {0}")]
    InvalidWeights(String),

    #[error("training labels contain a single class")]
    SingleClassTraining,

    #[error("feature width mismatch: model expects {expected}, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("t-test needs at least two observations per sample, got {0} and {1}")]
    InsufficientSamples(usize, usize),

    #[error("degrees of freedom must be positive, got {0}")]
    InvalidDf(f64),

    #[error("too few samples in class {class} to give every split part at least one")]
    TooFewSamples { class: u8 },

    #[error(
        "no distribution-matched split found within {attempts} attempts \
         (worst features on last attempt: {last_failures:?})"
    )]
    GateExhausted {
        attempts: usize,
        /// `(part, feature, p_value)` of the checks that failed on the last attempt.
        last_failures: Vec<(String, String, f64)>,
    },

    #[error("invalid signal profile: {0}")]
    InvalidProfile(String),

    #[error("empty confusion matrix")]
    EmptyMatrix,

    #[error("empty list")]
    EmptyList,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
