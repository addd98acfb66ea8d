use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The index lies outside the region where the defining series converges.
    #[error("out of convergence domain: {0}")]
    Domain(String),
    /// The argument is within the guard distance of a pole.
    #[error("pole proximity: distance {distance:.3e} below guard {guard:.1e}")]
    PoleProximity { distance: f64, guard: f64 },
    /// A malformed argument (bad q, empty index, invalid grid).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The requested evaluation exceeds the configured work budget.
    #[error("cost guard: {0}")]
    CostGuard(String),
}

impl Error {
    /// Short stable label used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "out of convergence domain",
            Error::PoleProximity { .. } => "pole proximity",
            Error::Argument(_) => "invalid argument",
            Error::CostGuard(_) => "cost guard",
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
