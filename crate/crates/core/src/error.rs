use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Fock truncation too small: need dim >= {required}, have {actual}")]
    Truncation { required: usize, actual: usize },

    #[error("undefined state: {0}")]
    UndefinedState(String),

    #[error("squeeze amplitude diverges: Delta_a = {delta_a} must exceed 2*Omega_1 = {two_omega_1}")]
    SqueezeDivergence { delta_a: f64, two_omega_1: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("time step {given} exceeds the stability bound; use dt <= {required}")]
    StepSize { required: f64, given: f64 },

    #[error("steady state is not unique (null-space multiplicity {multiplicity}); supply an initial-condition hint")]
    NullSpaceMultiplicity { multiplicity: usize },

    #[error("numerical contract violated: {0}")]
    Numerical(String),

    #[error("linear algebra failure: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
