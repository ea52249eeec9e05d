use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point} left the domain at step {step}")]
    DomainViolation { point: String, step: u64 },

    #[error("orbit of {requested} points exceeds the memory cap of {cap}; use the streaming index evaluation")]
    Capacity { requested: u64, cap: u64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("sequence cannot be extended: {0}")]
    Extension(String),

    #[error("insufficient sequence: {0}")]
    InsufficientSequence(String),

    #[error("value {value} at index {index} violates the bound {bound}")]
    BoundViolation { index: usize, value: f64, bound: f64 },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("checkpoint schedule too shallow: {0}")]
    Schedule(String),

    #[error("nested preimage set is empty at level {level}; the family violates the expanding condition")]
    ExpandingCondition { level: u64 },

    #[error("nested preimage set fell below the width tolerance at level {level}; double precision exhausted")]
    PrecisionExhausted { level: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown gallery system `{0}`")]
    UnknownGallery(String),

    #[error("gallery metadata failed verification: {0}")]
    CorruptGallery(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Config(err.to_string())
    }
}
