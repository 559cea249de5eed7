use thiserror::Error;

use crate::graph::VertexId;
use crate::oracle::OracleError;

/// Failure modes shared by every learner.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LearnError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{what}: narrowing loop exceeded {cap} iterations")]
    IterationCapExceeded { what: &'static str, cap: usize },
    #[error("vertex {0} has no parent in the vertex set")]
    NoParent(VertexId),
    #[error("separator loop gave up after {0} attempts")]
    LoopCapExceeded(usize),
    #[error("no cross edge: every probe was negative")]
    NoCrossEdgeFound,
    #[error("ambiguous candidate: {0}")]
    AmbiguousCandidate(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("{0} vertices is not 2^h (h + 1) for any h")]
    NotButterflyCardinality(usize),
    #[error("root finder returned {0}, which was already eliminated")]
    RootNotProgressing(VertexId),
    #[error("invalid learner config: {0}")]
    InvalidConfig(String),
}

impl LearnError {
    /// Randomized loops that ran out of budget, as opposed to bad input.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            LearnError::IterationCapExceeded { .. } | LearnError::LoopCapExceeded(_)
        )
    }
}
