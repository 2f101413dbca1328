use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("objects live over different rings")]
    RingMismatch,
    #[error("ill-formed module map: {0}")]
    IllFormedMap(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("invalid complex at degree {degree}: {reason}")]
    InvalidComplex { degree: i64, reason: String },
    #[error("not a chain map at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("purity precondition fails at degree {0}")]
    PrereqPurityFails(i64),
    #[error("precondition fails: {0}")]
    PrereqFails(String),
    #[error("pure injective side unsupported: {0}")]
    UnsupportedInjectiveBase(String),
    #[error("lift search failed: {0}")]
    LiftSearchFailed(String),
    #[error("map is not a pure quasi-isomorphism (first failing degree {0})")]
    NotPureQuasiIso(i64),
    #[error("independent verdicts disagree: {0}")]
    InconsistentVerdicts(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
