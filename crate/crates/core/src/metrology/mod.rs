//! Phase estimation with cat-state inputs: closed-form and Fock-space QFI,
//! constrained optimization at fixed photon number and scaling-law fits.

mod family;
mod fit;
mod optimize;

pub use family::{
    mandel_q, qfi_analytic, qfi_numeric, qfi_of_simulated_state, qfi_of_state, FamilyKind, QfiResult, StateFamily,
};
pub use fit::{default_fit_samples, fit_basis, fit_scaling, least_squares, BasisTerm, ScalingFit};
pub use optimize::{brute_force_qfi, optimize_qfi, Optimum, CONSTRAINT_TOL, R_MAX};
