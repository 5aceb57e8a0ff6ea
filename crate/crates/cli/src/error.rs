use thiserror::Error;

/// Errors raised by the simulation and estimation layer.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// A circulant eigenvalue below the tolerance means the embedding is
    /// wrong, not merely noisy.
    #[error("circulant embedding eigenvalue {eigenvalue} at index {index} below tolerance")]
    Embedding { eigenvalue: f64, index: usize },

    /// Cholesky pivot lost positive-definiteness beyond tolerance.
    #[error("covariance factorization pivot {pivot} at index {index} below tolerance")]
    Factorization { pivot: f64, index: usize },

    #[error("quadrature failed to reach relative tolerance {tolerance} after {refinements} refinements")]
    Quadrature { tolerance: f64, refinements: usize },

    #[error("unsupported subordinator spec: {0}")]
    UnsupportedSpec(&'static str),

    #[error("need at least {needed} observation points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] tailsup_core::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
