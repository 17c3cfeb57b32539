//! Library-wide error type.

/// Errors shared across the solver modules.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("edge {0} has zero length")]
    DegenerateEdge(&'static str),

    #[error("the paired edge lines are parallel; the common-perpendicular frame is undefined")]
    ParallelEdges,

    #[error("weights are infeasible at node {node}: {detail}")]
    InfeasibleWeights { node: &'static str, detail: String },

    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        /// Iterate history for diagnosis, when the caller asked for one.
        trace: Vec<(f64, f64)>,
    },

    #[error("recovered node lies off the Simpson segment ({detail}); the instance admits no two interior nodes for this pairing")]
    NodeOffSegment { detail: String },

    #[error("twist angle undefined: {0}")]
    UndefinedTwist(&'static str),

    #[error("degenerate configuration in the single-node system: {0}")]
    DegenerateConfiguration(&'static str),

    #[error("single-node solution inconsistent: {0}")]
    InconsistentSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
