use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precision failure: {0}")]
    Precision(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("malformed data at line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
