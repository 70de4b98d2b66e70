use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different groups (n = {left} and n = {right})")]
    ParameterMismatch { left: u32, right: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inadmissible signature {signature}: {reason}")]
    InadmissibleSignature { signature: String, reason: String },

    #[error("outside the domain of the operation: {0}")]
    Domain(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("construction invariant violated: {0}")]
    InvariantViolation(String),

    #[error("word and expected result differ in conformality")]
    ConformalityMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
