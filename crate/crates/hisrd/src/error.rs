//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix not positive definite: pivot {pivot:.3e} at index {index} (jitter {jitter:.3e})")]
    NotPositiveDefinite {
        index: usize,
        pivot: f64,
        jitter: f64,
    },

    #[error("singular triangular matrix: zero diagonal at index {0}")]
    SingularTriangular(usize),

    #[error("eigensolver failed to converge after {0} iterations")]
    EigenConvergence(usize),

    #[error("center infeasible: g_{index}(u, mean) = {value:.6e} >= 0")]
    CenterInfeasible { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Halton streams support at most {max} dimensions, got {got}")]
    QmcDimension { got: usize, max: usize },

    #[error("probability {0} outside the open interval (0, 1)")]
    InvalidProbability(f64),

    #[error("no feasible start found after {0} sigma reductions")]
    InfeasibleStart(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
