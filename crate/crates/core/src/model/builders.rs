use num_complex::Complex64 as C64;

use super::params::{DerivedParams, SystemParams};
use crate::dynamics::{Dissipator, Envelope, HamiltonianTerm, LindbladModel};
use crate::fock::{annihilation, embed, CompositeSpace, ModeSpace, Operator};
use crate::{Error, Result};

const RESONANCE_TOL: f64 = 1e-9;

fn local(dim: usize, space: &CompositeSpace, pos: usize) -> Result<Operator> {
    embed(&annihilation(ModeSpace::new(dim)?), space, pos)
}

/// Single-photon loss on mode a with the squeezed-frame reservoir.
fn mode_a_loss(a: &Operator, d: &DerivedParams) -> Result<Option<Dissipator>> {
    if d.kappa_a == 0.0 {
        return Ok(None);
    }
    Dissipator::squeezed(a.clone(), d.kappa_a, d.n_eff, d.m_eff).map(Some)
}

/// Two-photon-loss model of mode a alone after eliminating mode b:
/// `H = i J a^2 - i J a^dagger^2`, `Gamma_a D[a^2]`, plus optional single-photon loss.
pub fn build_reduced_model(d: &DerivedParams, kappa_a: f64, dim_a: usize) -> Result<LindbladModel> {
    let j = d.j_eff;
    if j.im.abs() > 1e-9 * j.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidParameter(
            "reduced model needs a real drive coupling J (phi_2 = 0 or pi, real eta_s)".into(),
        ));
    }
    let space = CompositeSpace::from_dims(&[dim_a])?;
    let a = local(dim_a, &space, 0)?;
    let a2 = &a * &a;
    let mut model = LindbladModel::new(space);
    if j.re != 0.0 {
        model.add_with_hc(a2.clone(), Envelope::Constant(C64::new(0.0, j.re)))?;
    }
    if d.gamma_a > 0.0 {
        model.add_dissipator(Dissipator::standard(a2, d.gamma_a)?)?;
    }
    let with_loss = DerivedParams { kappa_a, ..*d };
    if let Some(loss) = mode_a_loss(&a, &with_loss)? {
        model.add_dissipator(loss)?;
    }
    Ok(model)
}

/// Resonant three-wave-mixing terms shared by the approximate and exact tiers.
fn add_resonant_terms(model: &mut LindbladModel, d: &DerivedParams, a: &Operator, b: &Operator) -> Result<()> {
    let a2 = a * a;
    if d.g_complex != C64::default() {
        model.add_with_hc(&a2 * &b.adjoint(), Envelope::Constant(d.g_complex))?;
    }
    if d.omega_2 != 0.0 {
        model.add_with_hc(b.clone(), Envelope::Constant(C64::from_polar(d.omega_2, -d.phi_2)))?;
    }
    Ok(())
}

/// Modes a and b under degenerate three-wave mixing:
/// `H = G a^2 b^dagger + h.c. + Omega_2 (b e^{-i phi_2} + h.c.)`.
pub fn build_approx_model(d: &DerivedParams, dims: [usize; 2]) -> Result<LindbladModel> {
    let space = CompositeSpace::from_dims(&dims)?;
    let a = local(dims[0], &space, 0)?;
    let b = local(dims[1], &space, 1)?;
    let mut model = LindbladModel::new(space);
    add_resonant_terms(&mut model, d, &a, &b)?;
    if let Some(loss) = mode_a_loss(&a, d)? {
        model.add_dissipator(loss)?;
    }
    model.add_dissipator(Dissipator::standard(b, d.kappa_b)?)?;
    Ok(model)
}

/// Envelope frequencies of the five non-resonant terms, in the order
/// `a^2 b`, `a^2 b^dagger c`, `a^2 c^dagger b`, `a^dagger a b`, `a^dagger a b c^dagger`.
pub fn nonresonant_frequencies(p: &SystemParams) -> [f64; 5] {
    let (db, dc) = (p.delta_b, p.delta_c);
    [2.0 * db, dc, 2.0 * db - dc, db, db - dc]
}

/// Full three-mode interaction-picture model including every rotating term.
pub fn build_exact_model(p: &SystemParams, d: &DerivedParams, dims: [usize; 3]) -> Result<LindbladModel> {
    build_exact_model_with(p, d, dims, true)
}

/// As [`build_exact_model`]; `nonresonant = false` keeps only the resonant part.
pub fn build_exact_model_with(
    p: &SystemParams,
    d: &DerivedParams,
    dims: [usize; 3],
    nonresonant: bool,
) -> Result<LindbladModel> {
    let scale = p.delta_b.abs().max(1.0);
    if (p.delta_b - 2.0 * d.omega_sa).abs() > RESONANCE_TOL * scale
        || (p.drive_detuning_b - p.delta_b).abs() > RESONANCE_TOL * scale
    {
        return Err(Error::InvalidParameter(format!(
            "exact tier needs delta_b = 2 omega_sa = omega_2 - omega_3 (delta_b = {}, 2 omega_sa = {}, drive detuning = {})",
            p.delta_b,
            2.0 * d.omega_sa,
            p.drive_detuning_b
        )));
    }
    let space = CompositeSpace::from_dims(&dims)?;
    let a = local(dims[0], &space, 0)?;
    let b = local(dims[1], &space, 1)?;
    let c = local(dims[2], &space, 2)?;
    let mut model = LindbladModel::new(space.clone());
    add_resonant_terms(&mut model, d, &a, &b)?;

    if nonresonant {
        let a2 = &a * &a;
        let ad = a.adjoint();
        let (bd, cd) = (b.adjoint(), c.adjoint());
        let id = Operator::identity(space);
        // g_s a^dagger a + g sinh^2 r
        let shift = &(&ad * &a).scale_real(d.g_s) + &id.scale_real(p.g * d.r.sinh().powi(2));
        let w = nonresonant_frequencies(p);
        let g_half = C64::new(0.5 * d.g_p, 0.0);
        let pieces: [(Operator, C64); 5] = [
            (&a2 * &b, g_half * d.eta_s),
            (&(&a2 * &bd) * &c, -g_half),
            (&(&a2 * &cd) * &b, -g_half),
            (&shift * &b, -d.eta_s),
            (&(&shift * &b) * &cd, C64::new(1.0, 0.0)),
        ];
        for ((op, amp), freq) in pieces.into_iter().zip(w) {
            if amp == C64::default() {
                continue;
            }
            model.add_with_hc(op, Envelope::Oscillating { amplitude: amp, frequency: freq })?;
        }
    }

    if let Some(loss) = mode_a_loss(&a, d)? {
        model.add_dissipator(loss)?;
    }
    model.add_dissipator(Dissipator::standard(b, d.kappa_b)?)?;
    if p.kappa_c > 0.0 {
        model.add_dissipator(Dissipator::standard(c, p.kappa_c)?)?;
    }
    Ok(model)
}

/// Envelope frequency of every Hamiltonian term, in insertion order.
pub fn envelope_frequencies(model: &LindbladModel) -> Vec<f64> {
    model.terms().iter().map(|t: &HamiltonianTerm| t.envelope.frequency()).collect()
}
