use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("fault: line {line} is not resident")]
    Fault { line: usize },
    #[error("address {addr} out of bounds (disk holds {size} words)")]
    Bounds { addr: usize, size: usize },
    #[error("cache full: {lines} lines already resident")]
    Capacity { lines: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("operation needs {0} mode")]
    Mode(&'static str),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("negative cycle reachable from node {0}")]
    NegativeCycle(usize),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}
