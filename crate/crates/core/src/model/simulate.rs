use std::fmt;
use std::str::FromStr;

use super::builders::{build_approx_model, build_exact_model, build_reduced_model};
use super::params::{derive_params, DerivedParams, SystemParams};
use crate::dynamics::{evolve, EvolveOptions, LindbladModel, Observable, Trajectory};
use crate::fock::{cat_state, number, parity, CatKind, DensityMatrix, ModeSpace, PureState};
use crate::{Error, Result};

/// Level of approximation used for the cavity dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    /// Mode a alone with effective two-photon loss.
    Reduced,
    /// Modes a and b with resonant three-wave mixing.
    Approximate,
    /// Modes a, b and c with every rotating term kept.
    Exact,
}

impl Tier {
    pub fn default_dims(self) -> Vec<usize> {
        match self {
            Tier::Reduced => vec![40],
            Tier::Approximate => vec![20, 4],
            Tier::Exact => vec![20, 4, 3],
        }
    }

    pub fn num_modes(self) -> usize {
        match self {
            Tier::Reduced => 1,
            Tier::Approximate => 2,
            Tier::Exact => 3,
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Reduced => "reduced",
            Tier::Approximate => "approx",
            Tier::Exact => "exact",
        })
    }
}

impl FromStr for Tier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(Tier::Reduced),
            "approx" | "approximate" => Ok(Tier::Approximate),
            "exact" => Ok(Tier::Exact),
            other => Err(Error::InvalidParameter(format!(
                "unknown tier '{other}' (expected reduced, approx or exact)"
            ))),
        }
    }
}

/// Builds the model for `tier` on the given truncations.
pub fn build_model(p: &SystemParams, d: &DerivedParams, tier: Tier, dims: &[usize]) -> Result<LindbladModel> {
    if dims.len() != tier.num_modes() {
        return Err(Error::InvalidParameter(format!(
            "{tier} tier needs {} mode truncations, got {}",
            tier.num_modes(),
            dims.len()
        )));
    }
    match tier {
        Tier::Reduced => build_reduced_model(d, d.kappa_a, dims[0]),
        Tier::Approximate => build_approx_model(d, [dims[0], dims[1]]),
        Tier::Exact => build_exact_model(p, d, [dims[0], dims[1], dims[2]]),
    }
}

/// Starting state of mode a; the other modes start in vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitialState {
    Vacuum,
    OnePhoton,
}

impl InitialState {
    /// Parity is conserved, so vacuum flows to the even cat and `|1>` to the odd one.
    pub fn target_kind(self) -> CatKind {
        match self {
            InitialState::Vacuum => CatKind::Even,
            InitialState::OnePhoton => CatKind::Odd,
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialState::Vacuum => "vacuum",
            InitialState::OnePhoton => "one",
        })
    }
}

impl FromStr for InitialState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vacuum" | "0" => Ok(InitialState::Vacuum),
            "one" | "1" => Ok(InitialState::OnePhoton),
            other => Err(Error::InvalidParameter(format!(
                "unknown initial state '{other}' (expected vacuum or one)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatRun {
    pub derived: DerivedParams,
    /// Observables `fidelity`, `n_a` and `parity` of mode a in the squeezed frame.
    pub trajectory: Trajectory,
    pub dt: f64,
}

impl CatRun {
    pub fn fidelity(&self) -> Vec<f64> {
        self.trajectory.real_series("fidelity").expect("recorded")
    }
}

/// Evolves the vacuum under `tier` and records fidelity against the even cat.
///
/// Fidelity in the squeezed frame equals the lab-frame fidelity against
/// the squeezed cat, since both states are conjugated by the same unitary.
pub fn run_cat_generation(
    p: &SystemParams,
    tier: Tier,
    dims: &[usize],
    t_final: f64,
    n_samples: usize,
    dt: Option<f64>,
) -> Result<CatRun> {
    run_cat_generation_from(p, InitialState::Vacuum, tier, dims, t_final, n_samples, dt)
}

/// As [`run_cat_generation`], starting mode a in `initial` and targeting the cat of the same parity.
pub fn run_cat_generation_from(
    p: &SystemParams,
    initial: InitialState,
    tier: Tier,
    dims: &[usize],
    t_final: f64,
    n_samples: usize,
    dt: Option<f64>,
) -> Result<CatRun> {
    let d = derive_params(p)?;
    let alpha = d.alpha_or_err()?;
    let model = build_model(p, &d, tier, dims)?;
    let mode_a = ModeSpace::new(dims[0])?;
    let target = cat_state(mode_a, alpha, initial.target_kind())?;
    let start_a = match initial {
        InitialState::Vacuum => PureState::vacuum(mode_a.into()),
        InitialState::OnePhoton => PureState::fock(mode_a, 1)?,
    };
    let mut factors = vec![start_a];
    for m in &model.space().modes()[1..] {
        factors.push(PureState::vacuum((*m).into()));
    }
    let rho0 = DensityMatrix::from_pure(&PureState::product(&factors)?);
    let dt = dt.unwrap_or_else(|| model.max_dt());
    let (fid, n_a, par) = if tier == Tier::Reduced {
        (
            Observable::Fidelity(target),
            Observable::Expectation(number(mode_a)),
            Observable::Expectation(parity(mode_a)),
        )
    } else {
        let space = model.space();
        (
            Observable::ReducedFidelity { keep: vec![0], target },
            Observable::Expectation(crate::fock::embed(&number(mode_a), space, 0)?),
            Observable::Expectation(crate::fock::embed(&parity(mode_a), space, 0)?),
        )
    };
    let observables = vec![
        ("fidelity".to_string(), fid),
        ("n_a".to_string(), n_a),
        ("parity".to_string(), par),
    ];
    let opts = EvolveOptions::uniform(t_final, dt, n_samples);
    let trajectory = evolve(&model, &rho0, &observables, &opts)?;
    Ok(CatRun {
        derived: d,
        dt: trajectory.dt,
        trajectory,
    })
}

/// First time the series reaches `level`, linearly interpolated between samples.
pub fn first_crossing(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    if values.first().is_some_and(|&v| v >= level) {
        return times.first().copied();
    }
    times
        .windows(2)
        .zip(values.windows(2))
        .find(|(_, v)| v[0] < level && v[1] >= level)
        .map(|(t, v)| t[0] + (level - v[0]) / (v[1] - v[0]) * (t[1] - t[0]))
}

