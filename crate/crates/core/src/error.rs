use thiserror::Error;

/// Failure modes shared by every evaluation path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DunklError {
    /// An input violates a precondition (group order, regularity of `k`, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A finite-precision quantity left the representable range.
    #[error("range error: {0}")]
    Range(String),
    /// An iterative procedure hit its cap before certifying its result.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// An internal identity that must hold exactly was violated.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

impl DunklError {
    /// Machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            DunklError::Domain(_) => "domain",
            DunklError::Range(_) => "range",
            DunklError::Convergence(_) => "convergence",
            DunklError::Consistency(_) => "consistency",
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            DunklError::Domain(_) => 2,
            DunklError::Range(_) | DunklError::Convergence(_) => 3,
            DunklError::Consistency(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, DunklError>;
