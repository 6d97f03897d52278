use superrll_scalar::ScalarError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
