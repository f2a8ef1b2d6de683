use thiserror::Error;

/// Errors raised by the sparsification library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    InvalidMatrix,
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("Laplacian has no eigenvalue above the null threshold")]
    DegenerateLaplacian,
    #[error("row {row} of the boundary matrix is malformed")]
    InvalidBoundary { row: usize },
    #[error("sampling distribution has no positive mass")]
    DegenerateDistribution,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("graph has no edges")]
    NoEdges,
    #[error("quadratic form of the sketch vanishes on the test vector")]
    NullQuadraticForm,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
