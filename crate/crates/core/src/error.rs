use thiserror::Error;

/// Errors raised by the numerical kernels and model builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension must be at least 1")]
    Empty,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigenvalue iteration did not converge (dimension {dim}, iteration cap {max_iterations})")]
    NotConverged { dim: usize, max_iterations: usize },

    #[error("matrix exponential overflow (1-norm {norm:e})")]
    Overflow { norm: f64 },

    #[error("ambiguous eigenvalue clustering: clusters at {first} and {second} are {distance:e} apart (threshold {threshold:e})")]
    AmbiguousClustering {
        first: String,
        second: String,
        distance: f64,
        threshold: f64,
    },

    #[error("element is not in the Lie algebra (residual {residual:e})")]
    NotInAlgebra { residual: f64 },

    #[error("element is not in {subspace} (residual {residual:e})")]
    NotInSubspace { subspace: String, residual: f64 },

    #[error("matrix is not in the group (residual {residual:e})")]
    NotInGroup { residual: f64 },

    #[error("invalid involution signs: {0}")]
    InvalidSigns(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported model: {0}")]
    Unsupported(String),

    #[error("degenerate stratum: {0}")]
    Degenerate(String),

    #[error("point lies on a region boundary: {0}")]
    RegionBoundary(String),

    #[error("lattice search exceeded the cell limit ({limit})")]
    SearchLimit { limit: u64 },

    #[error("numerical breakdown: {0}")]
    Numerics(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
