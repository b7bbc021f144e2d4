use thiserror::Error;

use crate::refine::EquitabilityViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge weights must be finite")]
    NonFiniteWeight,
    #[error("adjacency matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partitions are over different ground sets ({left} vs {right} elements)")]
    GroundSetMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("partition is not equitable: {0}")]
    NotEquitable(EquitabilityViolation),
    #[error("partition is not a refinement: cell {cell} meets several cells of the coarser partition")]
    NotRefinement { cell: usize },
    #[error("{n} vertices exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("quotients differ under the given cell matching")]
    QuotientMismatch,
    #[error("graphs are not fractionally isomorphic")]
    NotFractionallyIsomorphic,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("matrix does not have total support")]
    NoTotalSupport,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("iteration stagnated after {iterations} iterations (residual {residual:e})")]
    Stagnation { iterations: usize, residual: f64 },
    #[error("structural precondition failed: {0}")]
    Structural(String),
    #[error("weight of vertex {vertex} is not positive")]
    NonPositiveWeight { vertex: usize },
    #[error("weights are not normalized on cell {cell}")]
    NotNormalized { cell: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a nonnegative orthogonal projector: {0}")]
    NotProjector(String),
    #[error("projector has no positive vector in its range")]
    NoPositiveRangeVector,
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::Stagnation { .. } | Error::Eigen(_))
    }
}
