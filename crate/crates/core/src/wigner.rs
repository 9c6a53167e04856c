//! Wigner functions on rectangular phase-space grids.
//!
//! Conventions: `beta = (q + i p)/sqrt(2)`, vacuum peak `1/pi`, `∫ W dq dp = 1`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::fock::{DensityMatrix, StateRef};
use crate::{Error, Result};

/// Largest `|beta|^2` accepted on a grid.
pub const MAX_DISPLACEMENT_SQ: f64 = 350.0;

/// Population allowed in the two highest Fock levels.
pub const TAIL_TOL: f64 = 1e-6;

const IMAG_TOL: f64 = 1e-10;

pub const DEFAULT_POINTS: usize = 101;

/// Rectangular grid description.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub q_half: f64,
    pub p_half: f64,
    pub points: usize,
    /// Cat-peak coordinates carried into the emitted grid.
    pub q0: f64,
    pub p0: f64,
}

impl GridSpec {
    /// `[-half, half]^2` with `points` samples per axis.
    pub fn square(half: f64, points: usize) -> Self {
        Self {
            q_half: half,
            p_half: half,
            points,
            q0: 0.0,
            p0: 0.0,
        }
    }

    /// Default window for a cat of amplitude `alpha` squeezed by `r`: `[-8, 8]^2`
    /// widened to reach past the peaks and scaled by `e^{-r}` along q and `e^{r}` along p.
    pub fn for_cat(alpha: C64, r: f64) -> Self {
        let (q0, p0) = peak_coordinates(alpha);
        Self {
            q_half: (q0.abs() + 5.0).max(8.0) * (-r).exp(),
            p_half: (p0.abs() + 5.0).max(8.0) * r.exp(),
            points: DEFAULT_POINTS,
            q0,
            p0,
        }
    }

    pub fn with_peaks(mut self, q0: f64, p0: f64) -> Self {
        self.q0 = q0;
        self.p0 = p0;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidParameter("a grid needs at least 2 points per axis".into()));
        }
        if !(self.q_half > 0.0 && self.p_half > 0.0 && self.q_half.is_finite() && self.p_half.is_finite()) {
            return Err(Error::InvalidParameter("grid half-widths must be positive and finite".into()));
        }
        Ok(())
    }

    pub fn q_values(&self) -> Vec<f64> {
        linspace(self.q_half, self.points)
    }

    pub fn p_values(&self) -> Vec<f64> {
        linspace(self.p_half, self.points)
    }
}

/// `q0 = (alpha + alpha*)/sqrt 2`, `p0 = (alpha - alpha*)/(i sqrt 2)`.
pub fn peak_coordinates(alpha: C64) -> (f64, f64) {
    (std::f64::consts::SQRT_2 * alpha.re, std::f64::consts::SQRT_2 * alpha.im)
}

fn linspace(half: f64, n: usize) -> Vec<f64> {
    let step = 2.0 * half / (n - 1) as f64;
    (0..n).map(|k| -half + step * k as f64).collect()
}

/// Sampled Wigner function; `values[[i, j]] = W(q_i, p_j)`.
#[derive(Clone, Debug)]
pub struct WignerGrid {
    pub q_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub values: Array2<f64>,
    pub q0: f64,
    pub p0: f64,
}

impl WignerGrid {
    pub fn dq(&self) -> f64 {
        spacing(&self.q_values)
    }

    pub fn dp(&self) -> f64 {
        spacing(&self.p_values)
    }

    /// Riemann sum of `W dq dp`.
    pub fn normalization(&self) -> f64 {
        self.values.sum() * self.dq() * self.dp()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `sum_p W dp` for every q sample.
    pub fn q_marginal(&self) -> Vec<f64> {
        let dp = self.dp();
        self.values.rows().into_iter().map(|row| row.sum() * dp).collect()
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> Result<f64> {
        if self.values.dim() != other.values.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn spacing(v: &[f64]) -> f64 {
    if v.len() < 2 {
        0.0
    } else {
        v[1] - v[0]
    }
}

/// `sum max(0, -W) dq dp`.
pub fn negativity_volume(grid: &WignerGrid) -> f64 {
    grid.values.iter().map(|w| (-w).max(0.0)).sum::<f64>() * grid.dq() * grid.dp()
}

/// Wigner function of a single-mode state as `(1/pi) Tr[rho D(beta) P D(beta)^dagger]`.
///
/// `D(beta) P D(beta)^dagger = D(2 beta) P`, so each diagonal of `rho` is weighted by
/// displacement matrix elements, generated by a forward Laguerre recurrence.
pub fn wigner_numeric<'a>(state: impl Into<StateRef<'a>>, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let rho = match state.into() {
        StateRef::Mixed(rho) => rho.clone(),
        StateRef::Pure(psi) => DensityMatrix::from_pure(psi),
    };
    if !rho.space().is_single_mode() {
        return Err(Error::InvalidParameter("Wigner functions are computed for one mode only".into()));
    }
    let m = rho.matrix();
    let dim = rho.dim();
    let tail: f64 = (dim.saturating_sub(2)..dim).map(|k| m[[k, k]].re.abs()).sum();
    if tail > TAIL_TOL {
        return Err(Error::Truncation {
            required: dim + 1,
            actual: dim,
        });
    }
    let reach = (spec.q_half * spec.q_half + spec.p_half * spec.p_half) / 2.0;
    if reach > MAX_DISPLACEMENT_SQ {
        return Err(Error::InvalidParameter(format!(
            "grid reaches |beta|^2 = {reach:.1}, above the supported {MAX_DISPLACEMENT_SQ}"
        )));
    }

    let q_values = spec.q_values();
    let p_values = spec.p_values();
    let mut scratch = vec![0.0; dim];
    let mut values = Array2::zeros((q_values.len(), p_values.len()));
    for (i, &q) in q_values.iter().enumerate() {
        for (j, &p) in p_values.iter().enumerate() {
            let w = point(m, &mut scratch, C64::new(q, p) / std::f64::consts::SQRT_2);
            if w.im.abs() > IMAG_TOL {
                return Err(Error::Numerical(format!(
                    "Wigner value at ({q}, {p}) has imaginary part {:.3e}",
                    w.im
                )));
            }
            values[[i, j]] = w.re;
        }
    }
    Ok(WignerGrid {
        q_values,
        p_values,
        values,
        q0: spec.q0,
        p0: spec.p0,
    })
}

fn point(m: &Array2<C64>, f: &mut [f64], beta: C64) -> C64 {
    // Diagonal a of rho pairs with f_k = sqrt(k!/(k+a)!) x^{a/2} e^{-x/2} L_k^{(a)}(x), x = 4|beta|^2.
    let dim = f.len();
    let x = 4.0 * beta.norm_sqr();
    let phase = if beta.norm() > 0.0 { beta / beta.norm() } else { C64::new(1.0, 0.0) };
    let mut rot = C64::new(1.0, 0.0);
    let mut log_start = -0.5 * x;
    let mut w = C64::default();
    for a in 0..dim {
        if a > 0 {
            rot *= phase;
            log_start += 0.5 * (x.ln() - (a as f64).ln());
        }
        let len = dim - a;
        f[0] = if x == 0.0 && a > 0 { 0.0 } else { log_start.exp() };
        if len > 1 {
            f[1] = (1.0 + a as f64 - x) * f[0] / (1.0 + a as f64).sqrt();
        }
        for k in 1..len.saturating_sub(1) {
            let (kf, af) = (k as f64, a as f64);
            f[k + 1] = ((2.0 * kf + 1.0 + af - x) * f[k] - (kf * (kf + af)).sqrt() * f[k - 1])
                / ((kf + 1.0) * (kf + 1.0 + af)).sqrt();
        }
        for k in 0..len {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = if a == 0 {
                m[[k, k]]
            } else {
                m[[k, k + a]] * rot + m[[k + a, k]] * rot.conj()
            };
            w += sign * f[k] * term;
        }
    }
    w / std::f64::consts::PI
}

/// Closed-form Wigner function of the squeezed even cat `S(r)^dagger (|alpha> + |-alpha>)`
/// with real amplitude `alpha`, as the sum of two squeezed Gaussians and their interference term.
pub fn wigner_analytic_secs(alpha: f64, r: f64, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    let (q0, p0) = peak_coordinates(C64::new(alpha, 0.0));
    let er = r.exp();
    let emr = (-r).exp();
    let denom = 1.0 + (-p0 * p0 - q0 * q0).exp();
    let pi = std::f64::consts::PI;
    let q_values = spec.q_values();
    let p_values = spec.p_values();
    let mut values = Array2::zeros((q_values.len(), p_values.len()));
    for (i, &q) in q_values.iter().enumerate() {
        for (j, &p) in p_values.iter().enumerate() {
            let (sp, sq) = (emr * p, er * q);
            let w1 = (-(sp - p0).powi(2) - (sq - q0).powi(2)).exp() / (2.0 * pi * denom);
            let w2 = (-(sp + p0).powi(2) - (sq + q0).powi(2)).exp() / (2.0 * pi * denom);
            let win = (-sp * sp - sq * sq).exp() / (pi * denom) * (2.0 * (sp * q0 - er * p0 * q)).cos();
            values[[i, j]] = w1 + w2 + win;
        }
    }
    Ok(WignerGrid {
        q_values,
        p_values,
        values,
        q0,
        p0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeSpace, PureState};

    #[test]
    fn vacuum_peak() {
        let vac = PureState::vacuum(ModeSpace::new(10).unwrap().into());
        let g = wigner_numeric(&vac, &GridSpec::square(1.0, 3)).unwrap();
        assert!((g.values[[1, 1]] - 1.0 / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn coherent_peak_sits_at_alpha() {
        let alpha = C64::new(0.8, -0.6);
        let psi = PureState::coherent(ModeSpace::new(40).unwrap(), alpha).unwrap();
        let (q0, p0) = peak_coordinates(alpha);
        let spec = GridSpec {
            q_half: q0.abs(),
            p_half: p0.abs(),
            points: 3,
            q0,
            p0,
        };
        let g = wigner_numeric(&psi, &spec).unwrap();
        assert!((g.values[[2, 0]] - 1.0 / std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn rejects_far_grid() {
        let vac = PureState::vacuum(ModeSpace::new(4).unwrap().into());
        assert!(wigner_numeric(&vac, &GridSpec::square(30.0, 3)).is_err());
    }
}
