use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (wrong grade, index not in subset, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Structural validation of a complex or framework failed.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Some (m-1)-face has three or more top-grade cofaces.
    #[error("not a manifold complex: face {face} has {count} cofaces")]
    NotManifold { face: String, count: usize },

    #[error("numeric degeneracy: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
