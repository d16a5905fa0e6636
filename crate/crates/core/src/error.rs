use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unassigned variable V({0})")]
    UnassignedVariable(i64),
    #[error("not proportional")]
    NotProportional,
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("vertex on boundary: j({t}) = {vertex}")]
    VertexOnBoundary { t: usize, vertex: i64 },
    #[error("infinite class: set a sign filter, kappa, or truncation")]
    InfiniteClass,
    #[error("step {0} is not a nonzero even integer")]
    InvalidStep(i64),
    #[error("V(0) = 0 is fixed and cannot be assigned")]
    ZeroStepAssigned,
    #[error("a walk needs at least one step")]
    EmptyWalk,
    #[error("invalid walk class: {0}")]
    InvalidClass(String),
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
