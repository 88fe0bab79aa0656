use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generators are not coprime (gcd {gcd})")]
    NonCoprime { gcd: u64 },

    #[error("integer overflow in 64-bit arithmetic")]
    Overflow,

    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("divisibility violated: {0}")]
    DivisibilityViolation(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("brick system is not admissible: X_{k} over bricks {subset:?} has gcd {gcd}")]
    NotAdmissible {
        k: usize,
        subset: Vec<usize>,
        gcd: u64,
    },

    #[error("bound not met on axis {axis}: side must exceed {required}, got {got}")]
    BoundNotMet {
        axis: usize,
        required: u64,
        got: u64,
    },

    #[error("{target} is not representable over the generators")]
    Unrepresentable { target: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("box volume {volume} exceeds the search cap of {cap} cells")]
    CapExceeded { volume: u128, cap: u128 },

    #[error("search limit reached before a verdict")]
    SearchExhausted,

    #[error("only 2-D tilings can be rendered, got dimension {dim}")]
    DimensionUnsupported { dim: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Short snake_case tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonCoprime { .. } => "non_coprime",
            Error::Overflow => "overflow",
            Error::InvalidGenerators(_) => "invalid_generators",
            Error::NotPrime(_) => "not_prime",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DivisibilityViolation(_) => "divisibility_violation",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NotAdmissible { .. } => "not_admissible",
            Error::BoundNotMet { .. } => "bound_not_met",
            Error::Unrepresentable { .. } => "unrepresentable",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::SearchExhausted => "search_exhausted",
            Error::DimensionUnsupported { .. } => "dimension_unsupported",
            Error::Parse { .. } => "parse_error",
        }
    }

    /// True for failures caused by size or search limits rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::Overflow | Error::CapExceeded { .. } | Error::SearchExhausted
        )
    }
}
