use thiserror::Error;

pub type Result<T, E = CglError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CglError {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("node {node} is out of range 1..={max}")]
    NodeOutOfRange { node: usize, max: usize },

    #[error("node {0} is an auxiliary node")]
    AuxiliaryNode(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
