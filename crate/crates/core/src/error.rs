use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point label {label} out of range for a ground set of {m} points")]
    LabelOutOfRange { label: usize, m: usize },

    #[error("ground set mismatch: {left} points vs {right} points")]
    GroundMismatch { left: usize, right: usize },

    #[error("rank mismatch: expected rank {expected}, got rank {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series has a zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("series truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("invalid composition {parts:?} of {n}")]
    InvalidComposition { parts: Vec<usize>, n: usize },

    #[error("invalid set partition of {{1..{n}}}: {reason}")]
    InvalidPartition { n: usize, reason: String },

    #[error("measure is not a probability measure: {0}")]
    NotProbability(String),

    #[error("reference measure has a zero weight at point {0}")]
    ZeroReferenceWeight(usize),

    #[error("reference measures of the two operands differ")]
    ReferenceMismatch,

    #[error("supports overlap at point {0}")]
    SupportOverlap(usize),

    #[error("component does not vanish off its declared support")]
    SupportViolation,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
