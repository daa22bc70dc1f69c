use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    #[error("invalid modulus {0}: expected an odd prime below 2^32")]
    InvalidModulus(u64),
    #[error("modulus {prime} must exceed the degree {degree}")]
    ModulusTooSmall { prime: u64, degree: i64 },
    #[error("operation needs at least {needed} points, got {got}")]
    Arity { needed: usize, got: usize },
    #[error("{0}")]
    Placement(&'static str),
    #[error("multiplicity list has {mults} entries but {tags} placement tags")]
    TagCount { mults: usize, tags: usize },
    #[error("degree {0} is below -2; h^2 no longer vanishes")]
    DegreeTooNegative(i64),
    #[error("the construction needs {0}")]
    Construction(&'static str),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("degeneration hypothesis fails: chi of the reduced system {reduced} < chi of the original {original}")]
    HypothesisFails { reduced: i64, original: i64 },
    #[error("point sampling gave up after {0} retries")]
    SamplingExhausted(u32),
    #[error("trial count must be at least 1")]
    NoTrials,
}
