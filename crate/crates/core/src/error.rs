use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("consistency error: {axiom} residual {residual:.3e}")]
    Consistency { axiom: String, residual: f64 },
    #[error("degenerate category: {0}")]
    DegenerateCategory(String),
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("strand count error at slice {slice}: {message}")]
    StrandCount { slice: usize, message: String },
    #[error("surgery component {0} is not closed")]
    UnclosedSurgeryComponent(String),
    #[error("index arity mismatch: expected {expected}, got {got}")]
    IndexArityMismatch { expected: usize, got: usize },
    #[error("boundary band is tangled: {0}")]
    TangledBoundaryBand(String),
    #[error("boundary type mismatch: {0}")]
    BoundaryTypeMismatch(String),
    #[error("uncolored variable {0}")]
    UncoloredVariable(String),
    #[error("diagram has open boundary")]
    OpenBoundary,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("types are not composable: {0}")]
    NotComposable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for errors caused by malformed input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::NotSupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
