//! Operators, states and measures on truncated bosonic modes.

pub mod linalg;
mod measures;
mod operator;
mod space;
pub mod sparse;
mod state;

pub use measures::{expectation, fidelity, partial_trace, pure_fidelity, trace_distance, variance, StateRef};
pub use operator::{
    annihilation, creation, displacement, embed, ladder, momentum, number, parity, position, squeeze,
    tensor, Ladder, Operator, SPARSE_CUTOFF,
};
pub use space::{check_truncation, required_dim, CompositeSpace, ModeSpace};
pub use sparse::CsrMatrix;
pub use state::{
    cat_state, squeezed_cat, CatKind, DensityMatrix, PureState, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};

pub(crate) use state::coherent_amplitudes;
