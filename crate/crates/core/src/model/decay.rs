use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::fock::{check_truncation, squeeze, DensityMatrix, ModeSpace, PureState};
use crate::Result;

/// Lab-frame image `S(r)^dagger |psi>` of a squeezed-frame state of mode a.
pub fn to_lab_frame(psi: &PureState, r: f64) -> Result<PureState> {
    let mode = single_mode(psi.space())?;
    check_truncation(mode.dim(), 0.0, r)?;
    psi.evolve(&squeeze(mode, C64::new(-r, 0.0))?)
}

/// Lab-frame image `S(r)^dagger rho S(r)` of a squeezed-frame density matrix.
pub fn to_lab_frame_dm(rho: &DensityMatrix, r: f64) -> Result<DensityMatrix> {
    let mode = single_mode(rho.space())?;
    check_truncation(mode.dim(), 0.0, r)?;
    rho.transform(&squeeze(mode, C64::new(-r, 0.0))?)
}

fn single_mode(space: &crate::fock::CompositeSpace) -> Result<ModeSpace> {
    if !space.is_single_mode() {
        return Err(crate::Error::InvalidParameter(
            "lab-frame mapping acts on mode a alone".into(),
        ));
    }
    Ok(space.modes()[0])
}

/// Closed-form squeezed even cat after time `t` of single-photon loss at rate `kappa_a`.
///
/// The coherent components shrink to `alpha e^{-kappa t/2}` while the cross terms carry
/// `exp[-2 alpha^2 (1 - e^{-kappa t})]`.
pub fn decayed_cat_density(alpha: f64, r: f64, kappa_a: f64, t: f64, dim: usize) -> Result<DensityMatrix> {
    let mode = ModeSpace::new(dim)?;
    check_truncation(dim, alpha.abs(), r)?;
    let x = alpha * alpha;
    let shrink = (-0.5 * kappa_a * t).exp();
    let beta = C64::new(alpha * shrink, 0.0);
    let plus = crate::fock::coherent_amplitudes(dim, beta);
    let minus = crate::fock::coherent_amplitudes(dim, -beta);
    let coherence = (-2.0 * x * (-(kappa_a * t)).exp_m1().abs()).exp();
    let n_e = 2.0 * (1.0 + (-2.0 * x).exp());
    let outer = |u: &ndarray::Array1<C64>, v: &ndarray::Array1<C64>| {
        Array2::from_shape_fn((dim, dim), |(i, j)| u[i] * v[j].conj())
    };
    let mut m = outer(&plus, &plus) + outer(&minus, &minus);
    m.scaled_add(C64::new(coherence, 0.0), &(outer(&plus, &minus) + outer(&minus, &plus)));
    m.mapv_inplace(|z| z / n_e);
    let frame = DensityMatrix::from_raw(mode.into(), m)?;
    let mut lab = if r == 0.0 { frame } else { to_lab_frame_dm(&frame, r)? }.into_matrix();
    crate::fock::linalg::hermitize(&mut lab);
    let tr = crate::fock::linalg::trace(&lab.view());
    lab.mapv_inplace(|z| z / tr);
    DensityMatrix::new(mode.into(), lab)
}

/// Squeezed vacuum `S(r)^dagger |0>` as a density matrix.
pub fn squeezed_vacuum(r: f64, dim: usize) -> Result<DensityMatrix> {
    let mode = ModeSpace::new(dim)?;
    let vac = PureState::vacuum(mode.into());
    Ok(DensityMatrix::from_pure(&to_lab_frame(&vac, r)?))
}
