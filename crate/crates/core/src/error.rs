use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different ambient groups")]
    AmbientMismatch,
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    OrderBoundExceeded { order: String, bound: String },
    #[error("invalid modulus {0}: moduli must be at least 1")]
    InvalidModulus(String),
    #[error("matrix does not define a homomorphism: {0}")]
    InvalidHomomorphism(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("budget exhausted after {steps} steps")]
    BudgetExhausted { steps: usize },
    #[error("intersection chain still descending after {0} base members")]
    NoStabilization(usize),
    #[error("truncated model has {size} elements, bound is {bound}")]
    TruncationTooLarge { size: String, bound: String },
    #[error("unsupported band pattern: {0}")]
    UnsupportedBandPattern(String),
    #[error("certificate verification failed: {0}")]
    VerificationFailed(String),
    #[error("value {0} does not fit the scalar type")]
    ScalarOverflow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
