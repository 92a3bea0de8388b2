use thiserror::Error;

/// Input that could not be read as a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected one or two vertex names, found {found} tokens")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: self-loop on vertex {name:?}")]
    SelfLoop { line: usize, name: String },
    #[error("line {line}: duplicate edge {u:?} {v:?}")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("graph6 offset {offset}: {reason}")]
    Graph6 { offset: usize, reason: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("multigraph is not biconnected")]
    NotBiconnected,
    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
