use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty vector or matrix")]
    Empty,

    #[error("non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive-definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("frame is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("ellipsoid must be centered at the origin")]
    NotCentered,

    #[error("point set is flat (no interior)")]
    Flat,

    #[error("body is unbounded")]
    Unbounded,

    #[error("solver did not converge after {iterations} iterations (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("numerical result is infeasible: {0}")]
    Infeasible(String),

    #[error("ellipsoids do not intersect")]
    EmptyIntersection,

    #[error("point is not interior to the body")]
    OutsideBody,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
