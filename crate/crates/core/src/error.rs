use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge index {0} out of range 0..=3")]
    EdgeIndexOutOfRange(i64),

    #[error("block length must be non-negative, got {0}")]
    NegativeLength(i64),

    #[error("decay factor |z| = {0} exceeds 1")]
    DecayOutOfRange(f64),

    #[error("ring normalization 1 + 3 z(L) vanishes (z = {0})")]
    DegenerateRingNorm(f64),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("boundary weights have zero norm")]
    ZeroBoundaryWeights,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |H_ij - conj(H_ji)| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("eigenvalue iteration did not converge for a {dim}x{dim} matrix")]
    NoConvergence { dim: usize },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("site sets overlap or fall outside the chain: {0}")]
    InvalidSites(String),

    #[error("unknown closed form kind '{0}'")]
    UnknownClosedForm(String),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
