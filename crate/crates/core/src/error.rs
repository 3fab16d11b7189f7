use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the zero polynomial has no order")]
    ZeroPolynomial,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("reduction did not terminate within depth {0}")]
    DepthExceeded(usize),

    #[error("cannot continue at a non-rational point: {0}")]
    NonRationalPoint(String),

    #[error("non-isolated singularities along the exceptional divisor (unsaturated input?)")]
    NonIsolatedSingularities,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("catalogue incomplete: {0}")]
    CatalogueIncomplete(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("lattice mismatch: expected rank {expected}, found {found}")]
    LatticeMismatch { expected: usize, found: usize },

    #[error("curve cannot be contracted: {0}")]
    NotContractible(String),

    #[error("unsupported format version: {0}")]
    UnsupportedVersion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
