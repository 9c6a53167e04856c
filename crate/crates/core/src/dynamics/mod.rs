//! Lindblad master-equation integration and steady states.
//!
//! Density matrices are vectorized by column stacking wherever a superoperator
//! is formed: `vec(A rho B) = (B^T (x) A) vec(rho)`.

mod evolve;
mod generator;
mod model;
mod steady;

pub use evolve::{dt_convergence, evolve, EvolveOptions, Observable, Trajectory, CHECKPOINT_TRACE_TOL};
pub use generator::{rhs, superoperator};
pub use model::{Dissipator, DissipatorKind, Envelope, HamiltonianTerm, LindbladModel};
pub use steady::{steady_state, SteadyState, SteadyStateHint, DENSE_STEADY_LIMIT, NULL_REL_TOL};
