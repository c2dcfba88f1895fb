use thiserror::Error;

/// Errors produced by symbol handling, form construction and the lift calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error in {input:?}: {reason}")]
    Syntax { input: String, reason: String },

    #[error("invalid symbol: {0}")]
    Validity(String),

    #[error("quadratic form is degenerate")]
    DegenerateForm,

    #[error("{what}: order {order} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        order: usize,
        bound: usize,
    },

    #[error("subgroup is not isotropic")]
    NotIsotropic,

    #[error("the trivial subgroup is not a valid lift source")]
    TrivialSubgroup,

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("not an isotropic cycle: {0}")]
    NotACycle(String),

    #[error("isotropic cycle has even length {0}")]
    EvenLength(usize),

    #[error("level {0} is not a power of 2")]
    NotTwoAdic(u64),

    #[error("subgroups are not nested")]
    NotNested,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("relation {relation} failed at entry ({row}, {col})")]
    RelationFailed {
        relation: &'static str,
        row: usize,
        col: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed or out-of-domain user input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::Validity(_)
                | Error::DimensionMismatch { .. }
                | Error::NotTwoAdic(_)
                | Error::NotIsotropic
                | Error::TrivialSubgroup
                | Error::NotNested
                | Error::NotACycle(_)
                | Error::EvenLength(_)
                | Error::HypothesisFailed(_)
        )
    }

    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::Validity(_) => "ValidityError",
            Error::DegenerateForm => "DegenerateForm",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::NotIsotropic => "NotIsotropic",
            Error::TrivialSubgroup => "TrivialSubgroup",
            Error::HypothesisFailed(_) => "HypothesisFailed",
            Error::NotACycle(_) => "NotACycle",
            Error::EvenLength(_) => "EvenLength",
            Error::NotTwoAdic(_) => "NotTwoAdic",
            Error::NotNested => "NotNested",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::RelationFailed { .. } => "RelationFailed",
            Error::Inconsistent(_) => "Inconsistent",
        }
    }
}
