//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point ({x}, {y}) lies outside the domain")]
    PointOutsideDomain { x: f64, y: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The collocation or time-stepping matrix could not be factored. This
    /// usually signals a kernel too flat for the node spacing, duplicate
    /// nodes, or a time step too large for the spatial operator.
    #[error("singular linear system (condition estimate {cond:.3e}); try a different shape parameter, fewer nodes, or a smaller time step")]
    SingularSystem { cond: f64 },

    #[error("node file parse error at line {line}: {msg}")]
    NodeParse { line: usize, msg: String },

    #[error("node ({x}, {y}) is flagged '{flag}' but classifies as {actual}")]
    NodeClassMismatch {
        x: f64,
        y: f64,
        flag: String,
        actual: String,
    },

    #[error("could not place {target} nodes (achieved {achieved}); lower the count or the separation")]
    TargetUnreachable { target: usize, achieved: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
