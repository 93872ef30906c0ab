use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: String) -> ParseError {
        ParseError { line, col, message }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid abstract memory state: {0}")]
    InvalidAms(String),
    #[error("too many variables: {got} (limit {limit}); raise the limit to force")]
    TooManyVars { got: usize, limit: usize },
    #[error("universe over {got} classes exceeds the limit of {limit}")]
    UniverseTooLarge { got: usize, limit: usize },
    #[error("heap with {got} pointers exceeds the oracle limit of {limit}")]
    HeapTooLarge { got: usize, limit: usize },
    #[error("free variable {0} not covered by the variable set")]
    UnboundVar(String),
    #[error("{0}")]
    Qbf(String),
    #[error("{0}")]
    Program(String),
    #[error("{0}")]
    Verification(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
