use thiserror::Error;

/// Errors raised by the laminate kernels, geometry and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LamError {
    #[error("degenerate laminate: {0}")]
    DegenerateLaminate(&'static str),

    #[error("invalid angle set: {0}")]
    AngleSet(String),

    #[error("invalid material: {0}")]
    Material(String),

    #[error("invalid load case: {0}")]
    LoadCase(String),

    #[error("invalid rule set: {0}")]
    Rules(String),

    #[error("ill-conditioned laminate: stiffness matrix is singular")]
    IllConditioned,

    #[error("buckling not applicable: no compressive running load")]
    BucklingNotApplicable,

    #[error("lamination parameter {value} outside [-1, 1]")]
    ParameterOutOfRange { value: f64 },

    #[error("empty point set")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("enumeration of {count} stacking sequences exceeds the guard of {limit}")]
    TooManySequences { count: u128, limit: u128 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, LamError>;
