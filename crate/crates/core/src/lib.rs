//! Truncated-Fock-space toolkit for squeezed Schrödinger-cat states.
//!
//! The crate covers four layers:
//!
//! * [`fock`]: operators, canonical states and measures on truncated bosonic modes.
//! * [`dynamics`]: Lindblad models, a fixed-step RK4 integrator and an SVD steady-state solver.
//! * [`model`]: parameter derivation for the three-mode Fredkin scheme, Hamiltonian builders
//!   at three fidelity tiers, RWA checks and the analytic single-photon-decay solution.
//! * [`wigner`] and [`metrology`]: phase-space and quantum-Fisher-information analysis.
//!
//! All times and rates are in units of the mode-b decay rate `kappa_b`.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod metrology;
pub mod model;
pub mod wigner;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
