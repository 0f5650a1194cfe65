use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("variable `{0}` is not in the valuation domain")]
    Domain(String),

    #[error("expected a constant expression, found `{0}`")]
    Shape(String),

    #[error("name `{0}` collides with the reserved fresh-variable namespace")]
    Namespace(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
