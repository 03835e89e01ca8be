use thiserror::Error;

/// Failure modes shared by every module of the engine.
///
/// `Singular` is the only recoverable one: callers resample the evaluation
/// point and try again. Everything else signals a bad request or a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbcError {
    #[error("square root leaves the quarter-exponent lattice: {0}")]
    Granularity(String),
    #[error("vanishing denominator at the sampled point: {0}")]
    Singular(String),
    #[error("evaluation matrix is singular for the sampled interpolation points")]
    DegenerateSample,
    #[error("operator image is not in the span of the orbit-sum basis: {0}")]
    NotInSpan(String),
    #[error("eigenvalue collision between {0} and {1}")]
    EigenvalueCollision(String, String),
    #[error("partition {0} does not fit in the {1}x{2} box")]
    OutOfBox(String, usize, usize),
    #[error("chain lattice of size {0} exceeds the budget {1}")]
    ChainOverflow(u128, u128),
    #[error("still singular after {0} resamples: {1}")]
    RetryBudgetExhausted(usize, String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl QbcError {
    pub fn is_singular(&self) -> bool {
        matches!(self, QbcError::Singular(_) | QbcError::DegenerateSample | QbcError::EigenvalueCollision(..))
    }
}

pub type Result<T> = std::result::Result<T, QbcError>;
