use thiserror::Error;

/// Errors raised by the function representations, transforms, estimators and
/// simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid piece: {0}")]
    InvalidPiece(String),

    #[error("wrong domain: expected {expected}, found {found}")]
    WrongDomain {
        expected: &'static str,
        found: &'static str,
    },

    #[error("evaluation point {point} is a breakpoint of the input")]
    SingularPoint { point: f64 },

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("sample count {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("integral diverges: {0}")]
    InfiniteIntegral(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ratio decreased at iteration {iteration}: {previous} -> {current}")]
    MonotonicityViolated {
        iteration: usize,
        previous: f64,
        current: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
