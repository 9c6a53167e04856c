//! Dense helpers on complex matrices.

use ndarray::{Array1, Array2, ArrayView2, ShapeBuilder, Zip};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::Result;

pub fn dagger(m: &ArrayView2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn max_abs(m: &ArrayView2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ArrayView2<C64>, b: &ArrayView2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    Zip::from(a)
        .and(b)
        .fold(0.0, |acc, x, y| f64::max(acc, (x - y).norm()))
}

pub fn hermiticity_error(m: &ArrayView2<C64>) -> f64 {
    let n = m.nrows();
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            err = err.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    err
}

pub fn trace(m: &ArrayView2<C64>) -> C64 {
    m.diag().sum()
}

/// Replaces `m` by `(m + m^dagger) / 2`.
pub fn hermitize(m: &mut Array2<C64>) {
    let n = m.nrows();
    for i in 0..n {
        m[[i, i]] = C64::new(m[[i, i]].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[[i, j]] + m[[j, i]].conj());
            m[[i, j]] = avg;
            m[[j, i]] = avg.conj();
        }
    }
}

/// Column-major copy; the LAPACK wrappers mishandle complex row-major input.
pub fn fortran_layout(m: &ArrayView2<C64>) -> Array2<C64> {
    let mut out = Array2::zeros(m.raw_dim().f());
    out.assign(m);
    out
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &ArrayView2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let mut h = m.to_owned();
    hermitize(&mut h);
    let (vals, vecs) = fortran_layout(&h.view()).eigh(UPLO::Lower)?;
    Ok((vals, vecs.as_standard_layout().into_owned()))
}

pub fn eigvalsh(m: &ArrayView2<C64>) -> Result<Array1<f64>> {
    Ok(eigh(m)?.0)
}

/// `V diag(f(lambda)) V^dagger` for Hermitian `m`.
pub fn hermitian_function(m: &ArrayView2<C64>, f: impl Fn(f64) -> C64) -> Result<Array2<C64>> {
    let (vals, vecs) = eigh(m)?;
    let mut scaled = vecs.clone();
    for (mut col, &lam) in scaled.columns_mut().into_iter().zip(vals.iter()) {
        let w = f(lam);
        col.mapv_inplace(|z| z * w);
    }
    Ok(scaled.dot(&dagger(&vecs.view())))
}

/// `exp(x)` for an anti-Hermitian generator `x`, via the Hermitian matrix `-i x`.
pub fn expm_anti_hermitian(x: &ArrayView2<C64>) -> Result<Array2<C64>> {
    let k = x.mapv(|z| z * C64::new(0.0, -1.0));
    hermitian_function(&k.view(), |lam| C64::new(0.0, lam).exp())
}

/// Principal square root of a positive semidefinite matrix; negative eigenvalues are clipped.
pub fn sqrt_psd(m: &ArrayView2<C64>) -> Result<Array2<C64>> {
    hermitian_function(m, |lam| C64::new(lam.max(0.0).sqrt(), 0.0))
}
