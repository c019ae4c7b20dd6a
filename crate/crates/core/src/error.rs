use thiserror::Error;

/// Which graph failed a positive-connectivity precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// The whole graph `G`.
    Graph,
    /// The graph with the special vertex removed, `G - i`.
    Grounded,
}

impl std::fmt::Display for Connectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Connectivity::Graph => f.write_str("G"),
            Connectivity::Grounded => f.write_str("G - i"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("negative or non-finite weight {0}")]
    NegativeWeight(f64),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("expected {expected} vertex weights, got {got}")]
    VertexWeightCount { expected: usize, got: usize },

    #[error("all vertex weights are zero")]
    AllVertexWeightsZero,

    #[error("graph is disconnected")]
    DisconnectedGraph,

    #[error("{0} is not positively connected")]
    NotPositivelyConnected(Connectivity),

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("vertex weight matrix is zero")]
    ZeroWeightMatrix,

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("function has zero w-norm")]
    ZeroWNorm,

    #[error("descent stalled at vertex {0}: no strictly smaller neighbour")]
    OrphanEncountered(usize),

    #[error("eigenfunction is not positive at vertex {0}")]
    PositivityViolated(usize),

    #[error("cell {0} contains an internal edge")]
    InternalEdgeInCell(usize),

    #[error("bad family parameters: {0}")]
    BadParams(String),

    #[error("pendant count floor(t*k) is zero")]
    TZero,

    #[error("no analytic quotient for family {0}")]
    UnsupportedFamily(String),

    #[error("no vertex labelled {0:?}")]
    UnknownLabel(String),

    #[error("path is invalid: {0}")]
    InvalidPath(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

}

pub type Result<T, E = Error> = std::result::Result<T, E>;
