use num_rational::BigRational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input width mismatch: expected {expected} bits, got {found}")]
    InputWidth { expected: usize, found: usize },

    #[error("resource cap exceeded: {what} requires {requested}, cap is {cap}")]
    Resource {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid invertible pair: forward map is not a bijection for z = {z}")]
    InvalidPair { z: u64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "gap condition b^2 - 2a + a^2 > 0 violated (gap = {gap}); polarize the instance first"
    )]
    GapViolation { gap: BigRational },

    #[error("oracle failed at stage {stage} after {attempts} attempts (observed success rate {success_rate:.4})")]
    OracleFailure {
        stage: usize,
        attempts: u32,
        success_rate: f64,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn resource(
        what: &'static str,
        requested: impl Into<u128>,
        cap: impl Into<u128>,
    ) -> Self {
        Error::Resource {
            what,
            requested: requested.into(),
            cap: cap.into(),
        }
    }
}
