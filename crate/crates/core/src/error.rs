use thiserror::Error;

/// Arithmetic or semantic failure inside the estimation engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("money overflow: amount exceeds {limit} cents")]
    Overflow { limit: i64 },

    #[error("division by zero in {context}")]
    ZeroDenominator { context: &'static str },

    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: String },

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: String,
        value: String,
        domain: &'static str,
    },

    #[error("jurisdiction {jurisdiction}: {reason}")]
    MethodMismatch {
        jurisdiction: String,
        reason: &'static str,
    },

    #[error("duplicate jurisdiction id {0:?}")]
    DuplicateJurisdiction(String),

    #[error("allocation ratio undefined: pure tax and pure non-tax costs are both zero")]
    UndefinedAllocation,

    #[error("allocation input {name} is negative")]
    NegativeAllocationInput { name: &'static str },

    #[error("net tax revenue is negative: municipal taxes exceed the total")]
    NegativeRevenue,

    #[error("value {value} cannot be represented in whole cents")]
    SubCent { value: String },
}

pub type DomainResult<T> = Result<T, DomainError>;
