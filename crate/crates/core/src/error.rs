use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the indicator, elasticity and statistics operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown venue `{0}`")]
    UnknownVenue(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),
    #[error("year {year} outside window {start}-{end}")]
    YearOutOfWindow { year: i32, start: i32, end: i32 },
    #[error("at least two years are required, got {0}")]
    InsufficientYears(usize),
    #[error("venue has no papers")]
    EmptyVenue,
    #[error("total citation count is zero")]
    ZeroCitationMass,
    #[error("elasticity point is undefined")]
    UndefinedPoint,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("at least {needed} observations are required, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
