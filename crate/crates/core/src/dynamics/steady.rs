use ndarray::{Array1, Array2};
use ndarray_linalg::{JobSvd, Solve, SVDDC};
use num_complex::Complex64 as C64;

use super::evolve::{evolve, EvolveOptions};
use super::generator::{rhs, Generator};
use super::model::LindbladModel;
use crate::fock::{linalg, DensityMatrix, PureState, TRACE_TOL};
use crate::{Error, Result};

/// Largest total dimension handled by the dense null-space path.
pub const DENSE_STEADY_LIMIT: usize = 64;

/// Singular values below `NULL_REL_TOL * sigma_max` count as zero.
pub const NULL_REL_TOL: f64 = 1e-9;

const FALLBACK_CHUNK: f64 = 10.0;
const FALLBACK_TOL: f64 = 1e-9;
const FALLBACK_MAX_CHUNKS: usize = 1000;

/// Selects one steady state when the null space is degenerate.
#[derive(Clone, Debug)]
pub enum SteadyStateHint {
    /// Start from the vacuum of every mode.
    Even,
    /// Start from one photon in mode 0, vacuum elsewhere.
    Odd,
    /// Start from an explicit initial state.
    Initial(DensityMatrix),
}

impl SteadyStateHint {
    fn initial_state(&self, model: &LindbladModel) -> Result<DensityMatrix> {
        let space = model.space().clone();
        match self {
            SteadyStateHint::Even => Ok(DensityMatrix::from_pure(&PureState::vacuum(space))),
            SteadyStateHint::Odd => {
                let stride: usize = space.dims()[1..].iter().product();
                let mut v = Array1::zeros(space.total_dim());
                v[stride] = C64::new(1.0, 0.0);
                Ok(DensityMatrix::from_pure(&PureState::new(space, v)?))
            }
            SteadyStateHint::Initial(rho) => {
                space.ensure_same(rho.space())?;
                Ok(rho.clone())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// Dimension of the Liouvillian null space; 0 when found by time evolution.
    pub multiplicity: usize,
    /// `max |d rho/dt|` at the returned state.
    pub residual: f64,
}

/// Stationary state of a time-independent model.
pub fn steady_state(model: &LindbladModel, hint: Option<&SteadyStateHint>) -> Result<SteadyState> {
    if !model.is_time_independent() {
        return Err(Error::InvalidParameter(
            "steady state requires a time-independent model".into(),
        ));
    }
    let n = model.space().total_dim();
    let (matrix, multiplicity) = if n <= DENSE_STEADY_LIMIT {
        null_space_state(model, hint)?
    } else {
        (long_time_state(model, hint)?, 0)
    };
    let mut matrix = matrix;
    linalg::hermitize(&mut matrix);
    let tr = linalg::trace(&matrix.view());
    if tr.norm() < 1e-300 {
        return Err(Error::Numerical("steady state has zero trace".into()));
    }
    matrix.mapv_inplace(|z| z / tr);
    let rho = DensityMatrix::from_raw(model.space().clone(), matrix)?;
    rho.validate(TRACE_TOL)?;
    let residual = linalg::max_abs(&rhs(model, &rho, 0.0)?.view());
    Ok(SteadyState {
        rho,
        multiplicity,
        residual,
    })
}

fn null_space_state(
    model: &LindbladModel,
    hint: Option<&SteadyStateHint>,
) -> Result<(Array2<C64>, usize)> {
    let n = model.space().total_dim();
    let l = Generator::new(model).superoperator(0.0);
    let (u, s, vt) = linalg::fortran_layout(&l.view()).svddc(JobSvd::All)?;
    let u = u.ok_or_else(|| Error::Numerical("SVD returned no left vectors".into()))?;
    let vt = vt.ok_or_else(|| Error::Numerical("SVD returned no right vectors".into()))?;
    let n2 = n * n;
    let tol = NULL_REL_TOL * s[0].max(f64::MIN_POSITIVE);
    let k = s.iter().filter(|&&x| x < tol).count();
    if k == 0 {
        return Err(Error::Numerical(format!(
            "Liouvillian has no null space (smallest singular value {:.3e})",
            s[n2 - 1]
        )));
    }
    // Null vectors pair with the trailing singular values.
    let right = Array2::from_shape_fn((n2, k), |(i, j)| vt[[n2 - k + j, i]].conj());
    let vec = if k == 1 {
        right.column(0).to_owned()
    } else {
        let hint = hint.ok_or(Error::NullSpaceMultiplicity { multiplicity: k })?;
        let rho0 = hint.initial_state(model)?;
        let left = Array2::from_shape_fn((n2, k), |(i, j)| u[[i, n2 - k + j]]);
        let left_h = linalg::dagger(&left.view());
        let v0 = column_stack(rho0.matrix());
        let m = linalg::fortran_layout(&left_h.dot(&right).view());
        let y = left_h.dot(&v0);
        let x = m.solve(&y)?;
        right.dot(&x)
    };
    Ok((column_unstack(&vec, n), k))
}

fn column_stack(m: &Array2<C64>) -> Array1<C64> {
    let n = m.nrows();
    Array1::from_shape_fn(n * n, |idx| m[[idx % n, idx / n]])
}

fn column_unstack(v: &Array1<C64>, n: usize) -> Array2<C64> {
    Array2::from_shape_fn((n, n), |(i, j)| v[i + j * n])
}

fn long_time_state(model: &LindbladModel, hint: Option<&SteadyStateHint>) -> Result<Array2<C64>> {
    let mut rho = match hint {
        Some(h) => h.initial_state(model)?,
        None => SteadyStateHint::Even.initial_state(model)?,
    };
    let opts = EvolveOptions {
        t_final: FALLBACK_CHUNK,
        dt: model.max_dt(),
        sample_times: Vec::new(),
        snapshot_times: Vec::new(),
    };
    for _ in 0..FALLBACK_MAX_CHUNKS {
        let next = evolve(model, &rho, &[], &opts)?.final_state;
        let change = linalg::max_abs_diff(&next.matrix().view(), &rho.matrix().view());
        rho = next;
        if change < FALLBACK_TOL {
            return Ok(rho.into_matrix());
        }
    }
    Err(Error::Numerical(
        "long-time evolution did not settle to a steady state".into(),
    ))
}
