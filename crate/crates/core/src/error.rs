use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid fraction: {0}")]
    InvalidFraction(String),
    #[error("letter value {0} does not fit in 31 bits")]
    LetterOverflow(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("morphism is not prolongable: {0}")]
    NotProlongable(String),
    #[error("letter {0} has no image")]
    UnknownLetter(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("no locating length: {0}")]
    NoLocatingLength(String),
    #[error("no unique factor at transient position {0}")]
    NoUniqueFactor(usize),
    #[error("{0} is outside the validity interval")]
    OutOfInterval(String),
    #[error("gcd condition violated: {0}")]
    GcdViolation(String),
    #[error("{0} is an excluded rational")]
    ExceptionRational(String),
    #[error("no candidate k found")]
    NoCandidate,
    #[error("conjectured structure is inconsistent: {0}")]
    Inconsistent(String),
    #[error("empty interval: {0}")]
    EmptyInterval(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
