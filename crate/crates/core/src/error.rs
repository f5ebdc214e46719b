use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    InvalidQ(String),

    #[error("level {k} is out of range for words of length {n}")]
    LevelOutOfRange { n: usize, k: usize },

    #[error("packed words hold at most 63 bits, requested {0}")]
    WordTooLong(usize),

    #[error("word has length {found}, measure lives on words of length {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dense tabulation is limited to n <= {max}, requested n = {n}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("measures live on different spaces: {0}")]
    DimensionMismatch(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("rate bound violated: {0}")]
    RateViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
