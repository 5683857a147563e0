use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("origin lies outside the region")]
    OriginOutsideRegion,

    #[error("cloud already carries a Palm point at the origin")]
    AlreadyPalm,

    #[error("pair count {pairs} exceeds budget {budget}")]
    PairBudgetExceeded { pairs: u128, budget: u128 },

    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("vertex {0} has no incident edges")]
    IsolatedVertex(usize),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("conjugate gradient hit iteration cap {iterations} (relative residual {residual:e})")]
    SolverDidNotConverge { iterations: usize, residual: f64 },

    #[error("quadrature did not reach tolerance {tol:e}: estimate {estimate}, error {error:e}")]
    QuadratureNotConverged { estimate: f64, error: f64, tol: f64 },

    #[error("initial range does not bracket the target: {0}")]
    NotBracketing(String),

    #[error("every replica was dropped ({0} attempts)")]
    AllReplicasDropped(usize),

    #[error("configuration is empty")]
    EmptyConfig,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure (solver, quadrature,
    /// resampling) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SolverDidNotConverge { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::AllReplicasDropped(_)
        )
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
