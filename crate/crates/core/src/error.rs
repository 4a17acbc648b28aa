use thiserror::Error;

/// Library-wide error type.
///
/// `Contradiction` signals a violated internal bound: it never fires on
/// in-class inputs and always indicates a bug upstream, so the CLI maps it
/// to its own exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex id {id} for graph on {n} vertices")]
    InvalidVertex { id: usize, n: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("internal contradiction: {0}")]
    Contradiction(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
