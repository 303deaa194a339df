use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable context mismatch")]
    ContextMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero weight in rescaling")]
    ZeroWeight,
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),
    #[error("resolution not terminated (truncated at max_steps)")]
    NotTerminated,
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
