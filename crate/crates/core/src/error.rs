use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("coefficient of u^{exp} requested but the series is truncated at u^{order}")]
    BeyondTruncation { exp: u32, order: u32 },
    #[error("constant term is not a unit")]
    NonUnit,
    #[error("series has a pole: valuation {num} is below the divisor's valuation {den}")]
    Pole { num: u32, den: u32 },
    #[error("product of two odd generators is not defined")]
    OddTimesOdd,
    #[error("generator arity mismatch: {0} vs {1}")]
    ArityMismatch(String, String),
    #[error("exponential needs a nilpotent even argument: {0}")]
    ExpArgument(&'static str),
    #[error("no numeric value assigned to generator {0}")]
    MissingAssignment(String),
    #[error("truncation too small: {0}")]
    InsufficientTruncation(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("tau = {0} is not in the upper half plane")]
    NotUpperHalfPlane(String),
}

pub type Result<T> = std::result::Result<T, Error>;
