use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: u64 },

    #[error("{a} is not a power of {g} modulo {m}")]
    NotInSubgroup { m: u64, g: u64, a: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("tolerance {tol} unreachable: {reason}")]
    ToleranceUnreachable { tol: String, reason: String },

    #[error("polynomial is reducible over the rationals")]
    Reducible,

    #[error("degree {degree} is beyond the supported bound {max}")]
    UnsupportedDegree { degree: usize, max: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn limit(what: impl Into<String>, cap: u64) -> Self {
        Error::ResourceLimit { what: what.into(), cap }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::PreconditionViolation(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::InternalInconsistency(msg.into())
    }
}
