use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::linalg;
use super::operator::{squeeze, Operator};
use super::space::{check_truncation, CompositeSpace, ModeSpace};
use crate::{Error, Result};

/// Default tolerances for a valid density matrix.
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatKind {
    Even,
    Odd,
    YurkeStoler,
}

/// Normalized state vector on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    space: CompositeSpace,
    amplitudes: Array1<C64>,
}

impl PureState {
    /// Normalizes `amplitudes`; a zero vector is rejected.
    pub fn new(space: CompositeSpace, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::UndefinedState("state vector has zero norm".into()));
        }
        Ok(Self {
            space,
            amplitudes: amplitudes.mapv(|z| z / norm),
        })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        self.space.ensure_same(&other.space)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies `op` and renormalizes.
    pub fn evolve(&self, op: &Operator) -> Result<PureState> {
        self.space.ensure_same(op.space())?;
        PureState::new(self.space.clone(), op.apply(&self.amplitudes)?)
    }

    pub fn fock(mode: ModeSpace, n: usize) -> Result<Self> {
        if n >= mode.dim() {
            return Err(Error::InvalidParameter(format!(
                "Fock level {n} outside truncation {}",
                mode.dim()
            )));
        }
        let mut v = Array1::zeros(mode.dim());
        v[n] = C64::new(1.0, 0.0);
        Ok(Self {
            space: mode.into(),
            amplitudes: v,
        })
    }

    pub fn vacuum(space: CompositeSpace) -> Self {
        let mut v = Array1::zeros(space.total_dim());
        v[0] = C64::new(1.0, 0.0);
        Self {
            space,
            amplitudes: v,
        }
    }

    /// Coherent state from its Poisson amplitudes, renormalized after truncation.
    pub fn coherent(mode: ModeSpace, alpha: C64) -> Result<Self> {
        check_truncation(mode.dim(), alpha.norm(), 0.0)?;
        PureState::new(mode.into(), coherent_amplitudes(mode.dim(), alpha))
    }

    /// Product state in the order of `factors`.
    pub fn product(factors: &[PureState]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("product of zero states".into()))?;
        let mut modes = first.space.modes().to_vec();
        let mut amps = first.amplitudes.clone();
        for f in rest {
            modes.extend_from_slice(f.space.modes());
            let mut next = Array1::zeros(amps.len() * f.dim());
            for (i, a) in amps.iter().enumerate() {
                for (j, b) in f.amplitudes.iter().enumerate() {
                    next[i * f.dim() + j] = a * b;
                }
            }
            amps = next;
        }
        PureState::new(CompositeSpace::new(modes)?, amps)
    }
}

/// `e^{-|alpha|^2/2} alpha^n / sqrt(n!)` for `n < dim`, without renormalization.
pub(crate) fn coherent_amplitudes(dim: usize, alpha: C64) -> Array1<C64> {
    let mut v = Array1::zeros(dim);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    v[0] = c;
    for n in 1..dim {
        c = c * alpha / (n as f64).sqrt();
        v[n] = c;
    }
    v
}

/// Even, odd or Yurke-Stoler superposition of `|alpha>` and `|-alpha>`.
pub fn cat_state(mode: ModeSpace, alpha: C64, kind: CatKind) -> Result<PureState> {
    check_truncation(mode.dim(), alpha.norm(), 0.0)?;
    let x = alpha.norm_sqr();
    let base = coherent_amplitudes(mode.dim(), alpha);
    let amps = match kind {
        CatKind::Even => {
            let n_e = 2.0 * (1.0 + (-2.0 * x).exp());
            let s = 2.0 / n_e.sqrt();
            Array1::from_shape_fn(mode.dim(), |n| if n % 2 == 0 { base[n] * s } else { C64::default() })
        }
        CatKind::Odd => {
            if x == 0.0 {
                return Err(Error::UndefinedState(
                    "odd cat state with alpha = 0 has zero norm".into(),
                ));
            }
            let n_o = -2.0 * (-2.0 * x).exp_m1();
            let s = 2.0 / n_o.sqrt();
            Array1::from_shape_fn(mode.dim(), |n| if n % 2 == 1 { base[n] * s } else { C64::default() })
        }
        CatKind::YurkeStoler => {
            let w_plus = C64::new(0.5, 0.5);
            let w_minus = C64::new(0.5, -0.5);
            Array1::from_shape_fn(mode.dim(), |n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                base[n] * (w_plus + w_minus * sign)
            })
        }
    };
    PureState::new(mode.into(), amps)
}

/// Lab-frame squeezed cat `S(r)^dagger |cat(alpha)>`.
pub fn squeezed_cat(mode: ModeSpace, alpha: C64, r: f64, kind: CatKind) -> Result<PureState> {
    check_truncation(mode.dim(), alpha.norm(), r)?;
    let cat = cat_state(mode, alpha, kind)?;
    if r == 0.0 {
        return Ok(cat);
    }
    let s_dag = squeeze(mode, C64::new(-r, 0.0))?;
    cat.evolve(&s_dag)
}

/// Hermitian, unit-trace, positive semidefinite matrix on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: CompositeSpace,
    matrix: Array2<C64>,
}

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(space: CompositeSpace, matrix: Array2<C64>) -> Result<Self> {
        Self::with_tolerance(space, matrix, TRACE_TOL)
    }

    /// Validates with a custom trace tolerance.
    pub fn with_tolerance(space: CompositeSpace, matrix: Array2<C64>, trace_tol: f64) -> Result<Self> {
        let rho = Self::from_raw(space, matrix)?;
        rho.validate(trace_tol)?;
        Ok(rho)
    }

    /// Shape check only; callers take responsibility for physicality.
    pub fn from_raw(space: CompositeSpace, matrix: Array2<C64>) -> Result<Self> {
        let n = space.total_dim();
        if matrix.dim() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        let n = v.len();
        let matrix = Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj());
        Self {
            space: psi.space().clone(),
            matrix,
        }
    }

    /// Convex combination; weights must be non-negative and sum to one.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut total = 0.0;
        let mut matrix = Array2::<C64>::zeros(first.matrix.dim());
        for (w, rho) in components {
            if *w < 0.0 || !w.is_finite() {
                return Err(Error::InvalidParameter(format!("mixture weight {w} is negative")));
            }
            first.space.ensure_same(&rho.space)?;
            matrix.scaled_add(C64::new(*w, 0.0), &rho.matrix);
            total += w;
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Self::new(first.space.clone(), matrix)
    }

    pub fn product(factors: &[DensityMatrix]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("product of zero states".into()))?;
        let mut modes = first.space.modes().to_vec();
        let mut m = first.matrix.clone();
        for f in rest {
            modes.extend_from_slice(f.space.modes());
            m = kron_dense(&m, &f.matrix);
        }
        Self::from_raw(CompositeSpace::new(modes)?, m)
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.matrix.view())
    }

    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.matrix.view())
    }

    pub fn eigenvalues(&self) -> Result<Array1<f64>> {
        linalg::eigvalsh(&self.matrix.view())
    }

    pub fn validate(&self, trace_tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if !(herm <= HERMITICITY_TOL) {
            return Err(Error::Numerical(format!(
                "density matrix not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = self.trace();
        if !((tr - 1.0).norm() <= trace_tol) {
            return Err(Error::Numerical(format!(
                "density matrix trace {:.12} deviates from 1",
                tr.re
            )));
        }
        let min = self.eigenvalues()?.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    /// Conjugation `U rho U^dagger`.
    pub fn transform(&self, u: &Operator) -> Result<Self> {
        self.space.ensure_same(u.space())?;
        let u = u.to_dense();
        let m = u.dot(&self.matrix).dot(&linalg::dagger(&u.view()));
        Self::from_raw(self.space.clone(), m)
    }

    /// Copies the populated block into a single-mode space of another truncation.
    ///
    /// Shrinking fails if the discarded levels carry more than `1e-8` of population.
    pub fn resize(&self, mode: ModeSpace) -> Result<Self> {
        if !self.space.is_single_mode() {
            return Err(Error::InvalidParameter("resize expects a single-mode state".into()));
        }
        let (old, new) = (self.dim(), mode.dim());
        let lost: f64 = (new.min(old)..old).map(|k| self.matrix[[k, k]].re).sum();
        if lost > 1e-8 {
            return Err(Error::Truncation {
                required: old,
                actual: new,
            });
        }
        let keep = new.min(old);
        let mut m = Array2::zeros((new, new));
        m.slice_mut(ndarray::s![..keep, ..keep])
            .assign(&self.matrix.slice(ndarray::s![..keep, ..keep]));
        Self::from_raw(mode.into(), m)
    }
}

pub(crate) fn kron_dense(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    Array2::from_shape_fn((ra * rb, ca * cb), |(i, j)| {
        a[[i / rb, j / cb]] * b[[i % rb, j % cb]]
    })
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        DensityMatrix::from_pure(psi)
    }
}
