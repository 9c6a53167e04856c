use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::LeastSquaresSvd;

use super::family::FamilyKind;
use super::optimize::{optimize_qfi, Optimum};
use crate::{Error, Result};

/// Regressor in a scaling law `F = sum_k c_k phi_k(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTerm {
    One,
    SqrtN,
    N,
    NSquared,
}

impl BasisTerm {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            BasisTerm::One => 1.0,
            BasisTerm::SqrtN => n.sqrt(),
            BasisTerm::N => n,
            BasisTerm::NSquared => n * n,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisTerm::One => "1",
            BasisTerm::SqrtN => "sqrt(N)",
            BasisTerm::N => "N",
            BasisTerm::NSquared => "N^2",
        }
    }
}

/// Fit basis for the squeezed families.
pub fn fit_basis(kind: FamilyKind) -> Result<Vec<BasisTerm>> {
    match kind {
        FamilyKind::Secs | FamilyKind::Syscs => Ok(vec![BasisTerm::N, BasisTerm::NSquared]),
        FamilyKind::Socs => Ok(vec![BasisTerm::One, BasisTerm::SqrtN, BasisTerm::N, BasisTerm::NSquared]),
        _ => Err(Error::InvalidParameter(format!("no scaling-law basis is defined for {kind}"))),
    }
}

/// `N in {4, 6, ..., 100}`.
pub fn default_fit_samples() -> Vec<f64> {
    (2..=50).map(|k| 2.0 * k as f64).collect()
}

#[derive(Clone, Debug)]
pub struct ScalingFit {
    pub kind: FamilyKind,
    pub basis: Vec<BasisTerm>,
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual of the optimized QFI values.
    pub residual: f64,
    pub optima: Vec<Optimum>,
}

impl ScalingFit {
    pub fn coefficient(&self, term: BasisTerm) -> Option<f64> {
        self.basis.iter().position(|&t| t == term).map(|k| self.coefficients[k])
    }

    pub fn predict(&self, n: f64) -> f64 {
        self.basis.iter().zip(&self.coefficients).map(|(t, c)| c * t.eval(n)).sum()
    }
}

/// Ordinary least squares of `(N, F)` pairs on `basis`; returns coefficients and RMS residual.
pub fn least_squares(basis: &[BasisTerm], points: &[(f64, f64)]) -> Result<(Vec<f64>, f64)> {
    if points.len() < basis.len() {
        return Err(Error::InvalidParameter(format!(
            "{} samples cannot determine {} coefficients",
            points.len(),
            basis.len()
        )));
    }
    let mut a = Array2::<f64>::zeros((points.len(), basis.len()).f());
    for (i, &(n, _)) in points.iter().enumerate() {
        for (k, t) in basis.iter().enumerate() {
            a[[i, k]] = t.eval(n);
        }
    }
    let b: Array1<f64> = points.iter().map(|p| p.1).collect();
    let sol = a.least_squares(&b)?;
    let coeffs = sol.solution.to_vec();
    let rss: f64 = points
        .iter()
        .map(|&(n, f)| {
            let model: f64 = basis.iter().zip(&coeffs).map(|(t, c)| c * t.eval(n)).sum();
            (f - model).powi(2)
        })
        .sum();
    Ok((coeffs, (rss / points.len() as f64).sqrt()))
}

/// Fits the optimized QFI `F*(N)` of a squeezed family on its scaling basis.
pub fn fit_scaling(kind: FamilyKind, samples: &[f64]) -> Result<ScalingFit> {
    let basis = fit_basis(kind)?;
    let optima = samples
        .iter()
        .map(|&n| optimize_qfi(kind, n))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = optima.iter().map(|o| (o.n_target, o.f)).collect();
    let (coefficients, residual) = least_squares(&basis, &points)?;
    Ok(ScalingFit {
        kind,
        basis,
        coefficients,
        residual,
        optima,
    })
}
