//! Physics of the driven three-mode scheme: frame derivations, model builders
//! at three tiers, rotating-wave checks and single-photon decay.

mod builders;
mod decay;
mod params;
mod rwa;
mod simulate;

pub use builders::{
    build_approx_model, build_exact_model, build_exact_model_with, build_reduced_model, envelope_frequencies,
    nonresonant_frequencies,
};
pub use decay::{decayed_cat_density, squeezed_vacuum, to_lab_frame, to_lab_frame_dm};
pub use params::{
    derive_params, effective_reservoir, lifetime, matched_reservoir, params_for_target, reservoir, squeeze_amplitude,
    BaseParams, DerivedParams, SystemParams,
};
pub use rwa::{rwa_validity, Occupations, RwaEntry, RwaReport, RWA_THRESHOLD};
pub use simulate::{
    build_model, first_crossing, run_cat_generation, run_cat_generation_from, CatRun, InitialState, Tier,
};
