use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input describes something that is not a valid net, formula, state or instance.
    #[error("model error: {0}")]
    Model(String),

    /// A construction was applied to an input outside its domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exhaustive procedure would exceed the configured size cap.
    #[error("capacity exceeded: {what} over {n} variables (limit {limit})")]
    Capacity {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
