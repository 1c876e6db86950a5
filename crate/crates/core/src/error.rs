use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("evaluation error in `{node}`: {message}")]
    Eval { node: String, message: String },
    #[error("contraction schema error: {0}")]
    Schema(String),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("metric is singular at the requested point")]
    SingularMetric,
    #[error("loop is not closed (endpoint gap {0:e})")]
    Loop(f64),
    #[error("vectors do not span an orthonormal spacelike or timelike plane: {0}")]
    Plane(String),
    #[error("curvature model has unexpected structure: {0}")]
    Model(String),
    #[error("value outside the domain of the invariant: {0}")]
    Domain(String),
    #[error("theorem hypothesis fails: {0}")]
    Hypothesis(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
