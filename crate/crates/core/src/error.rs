use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is singular")]
    Singular,

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    #[error("missing constraint datum: {0}")]
    NeedsConstraint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
