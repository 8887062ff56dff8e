use thiserror::Error;

/// Errors raised across the algebra layers.
///
/// The variants fall into two classes that front-ends report differently:
/// [`Error::Parse`] for malformed input text, and everything else for
/// inputs that are well-formed but violate an operation's precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("anchor mismatch: {left} vs {right}")]
    AnchorMismatch { left: String, right: String },

    #[error("object mismatch: {left} does not compose with {right}")]
    ObjectMismatch { left: String, right: String },

    #[error("{n} is not invertible in {ring}")]
    NotInvertible { n: u64, ring: String },

    #[error("degenerate module: local units do not fix vector {witness:?}")]
    DegenerateModule { witness: Vec<String> },

    #[error("operation unsupported over {0}")]
    UnsupportedRing(String),

    #[error("depth {depth} cannot represent the element (needs at least {needed})")]
    DepthTooSmall { depth: usize, needed: usize },

    #[error("fiber over {0} is not finite at the requested depth")]
    InfiniteFiber(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid structure: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
