use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("duplicate free set variable `{0}`")]
    DuplicateFreeVariable(String),
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("unknown builtin formula `{0}`")]
    UnknownBuiltin(String),
    #[error("reserved color name `{0}` already in use")]
    ReservedColor(String),
    #[error("formula is not MSO1: {0}")]
    NotMso1(String),

    #[error("graph format error at line {line}: {message}")]
    GraphFormat { line: usize, message: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid exact cover instance: {0}")]
    InvalidXcr(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
