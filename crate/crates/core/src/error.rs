use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty graph")]
    EmptyGraph,

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("opinion at line {line} is {value}, outside [0, 1]")]
    OpinionOutOfRange { line: usize, value: f64 },

    #[error("graph has {n} nodes, above the dense oracle cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("{0} is not supported on directed graphs")]
    DirectedUnsupported(&'static str),

    #[error(
        "push watchdog tripped after {pushes} pushes without termination; \
         some internal opinions are probably zero, use improved_bli / improved_blisor"
    )]
    Watchdog { pushes: u64 },

    #[error("residual reached {residual:e} (limit {limit:e}); omega = {omega} does not converge on this graph")]
    Divergence {
        omega: f64,
        residual: f64,
        limit: f64,
    },

    #[error("no convergence after {iterations} iterations (last step {last_delta:e})")]
    NoConvergence { iterations: usize, last_delta: f64 },

    #[error("no relaxation parameter in the sweep grid converged")]
    SweepFailed,

    #[error("dense system is singular")]
    Singular,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical procedure itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Watchdog { .. }
                | Error::Divergence { .. }
                | Error::NoConvergence { .. }
                | Error::SweepFailed
                | Error::Singular
        )
    }
}
