use thiserror::Error;

/// Errors raised by the library.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("basis is not orthonormal (max deviation {deviation})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("overlap <phi_{l}|psi_{j}> has modulus {modulus}, too small for a weak value")]
    OverlapTooSmall { l: usize, j: usize, modulus: f64 },

    #[error("singular measurement: |det mu| = {det}")]
    SingularMeasurement { det: f64 },

    #[error("matrix is not bistochastic: {0}")]
    NotBistochastic(String),

    #[error("matrix is not unistochastic (chain links {links:?})")]
    NotUnistochastic { links: [f64; 3] },

    #[error("unitary search failed after {iterations} iterations (residual {residual})")]
    SearchFailed { iterations: usize, residual: f64 },

    #[error("N = {0} is too large to enumerate permutation corners")]
    TooManyCorners(usize),

    #[error("invalid corner subset: {0}")]
    InvalidCornerSubset(String),

    #[error("invalid resolution {resolution} (minimum {min})")]
    InvalidResolution { resolution: usize, min: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
