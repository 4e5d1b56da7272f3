use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("objects live over different rings")]
    RingMismatch,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidMap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid prime table: {0}")]
    InvalidTable(String),
    #[error("invalid perversity function: {0}")]
    InvalidPerversity(String),
    #[error("free resolution longer than the number of variables: {0}")]
    LengthBound(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
