use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Laboratory knobs of the three-mode scheme, in units of `kappa_b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_c: f64,
    /// Fredkin coupling.
    pub g: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    pub omega_3: f64,
    pub phi_1: f64,
    pub phi_2: f64,
    pub phi_3: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
    pub r_env: f64,
    pub phi_env: f64,
    /// Detuning `omega_2 - omega_3` of the mode-b drive.
    pub drive_detuning_b: f64,
}

/// Quantities derived in the displaced, squeezed and interaction frames.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedParams {
    pub eta_s: C64,
    pub r: f64,
    pub omega_sa: f64,
    pub g_s: f64,
    pub g_p: f64,
    /// Complex three-wave coupling `g_p eta_s / 2`.
    pub g_complex: C64,
    /// Real part of the three-wave coupling.
    pub g_three_wave: f64,
    pub gamma_a: f64,
    pub j_eff: C64,
    /// Target cat amplitude; `None` when the three-wave coupling vanishes.
    pub alpha: Option<C64>,
    pub n_eff: f64,
    pub m_eff: C64,
    pub omega_2: f64,
    pub phi_2: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
}

impl DerivedParams {
    pub fn alpha_or_err(&self) -> Result<C64> {
        self.alpha.ok_or_else(|| {
            Error::InvalidParameter("cat amplitude undefined for vanishing three-wave coupling".into())
        })
    }
}

/// Squeeze amplitude `r = (1/4) ln[(delta_a + 2 omega_1)/(delta_a - 2 omega_1)]`.
pub fn squeeze_amplitude(delta_a: f64, omega_1: f64) -> Result<f64> {
    if !(delta_a > 2.0 * omega_1.abs()) {
        return Err(Error::SqueezeDivergence {
            delta_a,
            two_omega_1: 2.0 * omega_1,
        });
    }
    Ok(0.25 * ((delta_a + 2.0 * omega_1) / (delta_a - 2.0 * omega_1)).ln())
}

/// Effective reservoir occupation and correlation seen in the squeezed frame.
pub fn effective_reservoir(r: f64, r_env: f64, phi_env: f64) -> (f64, C64) {
    let (sr, cr) = (r.sinh(), r.cosh());
    let (se, ce) = (r_env.sinh(), r_env.cosh());
    let n_eff = sr * sr * ce * ce
        + cr * cr * se * se
        + 0.5 * phi_env.cos() * (2.0 * r).sinh() * (2.0 * r_env).sinh();
    let e = C64::from_polar(1.0, phi_env);
    let m_eff = (cr * ce + e.conj() * sr * se) * (sr * ce + e * cr * se);
    (n_eff, m_eff)
}

/// Reservoir `(N_e, M_e)` for squeeze `r_env` and phase `phi_env`.
pub fn reservoir(r_env: f64, phi_env: f64) -> (f64, C64) {
    (
        r_env.sinh().powi(2),
        C64::from_polar(r_env.sinh() * r_env.cosh(), phi_env),
    )
}

/// Reservoir that cancels the squeezed-frame noise: `r_e = r`, `phi_e = pi`.
pub fn matched_reservoir(r: f64) -> (f64, C64) {
    if r == 0.0 {
        return (0.0, C64::default());
    }
    reservoir(r, PI)
}

pub fn derive_params(p: &SystemParams) -> Result<DerivedParams> {
    if !(p.kappa_b > 0.0) {
        return Err(Error::InvalidParameter(format!("kappa_b must be positive, got {}", p.kappa_b)));
    }
    if p.phi_1 != 0.0 {
        return Err(Error::InvalidParameter(
            "the frame derivation assumes phi_1 = 0".into(),
        ));
    }
    for (name, k) in [("kappa_a", p.kappa_a), ("kappa_c", p.kappa_c)] {
        if !(k >= 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {k}")));
        }
    }
    let r = squeeze_amplitude(p.delta_a, p.omega_1)?;
    let omega_sa = p.delta_a / (2.0 * r).cosh();
    let g_s = p.g * (2.0 * r).cosh();
    let g_p = p.g * (2.0 * r).sinh();
    let eta_s = C64::from_polar(p.omega_3, p.phi_3) / C64::new(p.delta_c, -0.5 * p.kappa_c);
    let g_complex = 0.5 * g_p * eta_s;
    let gamma_a = 4.0 * g_complex.norm_sqr() / p.kappa_b;
    let drive = C64::from_polar(p.omega_2, p.phi_2);
    let j_eff = 2.0 * drive * g_complex / p.kappa_b;
    let alpha = if g_complex.norm() > 0.0 {
        Some((-drive / g_complex).sqrt())
    } else {
        None
    };
    let (n_eff, m_eff) = effective_reservoir(r, p.r_env, p.phi_env);
    Ok(DerivedParams {
        eta_s,
        r,
        omega_sa,
        g_s,
        g_p,
        g_complex,
        g_three_wave: g_complex.re,
        gamma_a,
        j_eff,
        alpha,
        n_eff,
        m_eff,
        omega_2: p.omega_2,
        phi_2: p.phi_2,
        kappa_a: p.kappa_a,
        kappa_b: p.kappa_b,
        kappa_c: p.kappa_c,
    })
}

/// Parameters held fixed while targeting a cat amplitude, squeeze and coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaseParams {
    pub delta_a: f64,
    pub g: f64,
    /// `delta_c / delta_b`.
    pub delta_c_ratio: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub kappa_c: f64,
}

impl BaseParams {
    /// Operating point of the fidelity-versus-time study.
    pub fn reference() -> Self {
        Self {
            delta_a: 100.0,
            g: 1e-3,
            delta_c_ratio: 11.0,
            kappa_a: 0.0,
            kappa_b: 1.0,
            kappa_c: 1.0,
        }
    }

    /// Reference point with `delta_a` divided by five; every derived detuning scales with it.
    pub fn scaled_detuning() -> Self {
        Self {
            delta_a: 20.0,
            ..Self::reference()
        }
    }
}

/// Inverts the derivation chain for real `alpha`, `r` and three-wave coupling `g_target`.
///
/// Chooses `phi_1 = 0`, `phi_2 = pi`, a real positive `eta_s`, the resonance
/// `delta_b = 2 omega_sa = omega_2 - omega_3` and the matched reservoir.
pub fn params_for_target(alpha: f64, r: f64, g_target: f64, base: &BaseParams) -> Result<SystemParams> {
    let infeasible = |msg: String| Err(Error::Infeasible(msg));
    if !(r > 0.0) || !r.is_finite() {
        return infeasible(format!("squeeze amplitude must be positive to realize a coupling, got {r}"));
    }
    if !(g_target > 0.0) || !g_target.is_finite() {
        return infeasible(format!("three-wave coupling must be positive, got {g_target}"));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return infeasible(format!("cat amplitude must be non-negative, got {alpha}"));
    }
    if !(base.delta_a > 0.0) || !(base.g > 0.0) || !(base.kappa_b > 0.0) {
        return infeasible("delta_a, g and kappa_b must be positive".into());
    }
    let omega_1 = 0.5 * base.delta_a * (2.0 * r).tanh();
    let omega_sa = base.delta_a / (2.0 * r).cosh();
    let delta_b = 2.0 * omega_sa;
    let delta_c = base.delta_c_ratio * delta_b;
    let g_p = base.g * (2.0 * r).sinh();
    let eta_s = 2.0 * g_target / g_p;
    let denom = C64::new(delta_c, -0.5 * base.kappa_c);
    let omega_3 = eta_s * denom.norm();
    let phi_3 = denom.arg();
    let omega_2 = alpha * alpha * g_target;
    Ok(SystemParams {
        delta_a: base.delta_a,
        delta_b,
        delta_c,
        g: base.g,
        omega_1,
        omega_2,
        omega_3,
        phi_1: 0.0,
        phi_2: PI,
        phi_3,
        kappa_a: base.kappa_a,
        kappa_b: base.kappa_b,
        kappa_c: base.kappa_c,
        r_env: r,
        phi_env: PI,
        drive_detuning_b: delta_b,
    })
}

/// Approximate cat lifetime `1 / (2 |alpha|^2 kappa_a)` under single-photon loss.
pub fn lifetime(alpha: f64, kappa_a: f64) -> f64 {
    1.0 / (2.0 * alpha * alpha * kappa_a)
}
