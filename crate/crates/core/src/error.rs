use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not divisible by x: constant term is {0}")]
    NotDivisibleByX(String),

    #[error("not a supported extended shape: {0}")]
    UnsupportedShape(String),

    #[error("composition {0} is not proper (all entries must be >= 1)")]
    NotProper(String),

    #[error("invalid composition `{0}`")]
    InvalidComposition(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid closed-form JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
