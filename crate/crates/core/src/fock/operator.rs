use std::borrow::Cow;
use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::linalg;
use super::space::{check_truncation, CompositeSpace, ModeSpace};
use super::sparse::CsrMatrix;
use crate::{Error, Result};

/// Composite spaces larger than this are stored sparsely.
pub const SPARSE_CUTOFF: usize = 256;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Dense(Array2<C64>),
    Sparse(CsrMatrix),
}

/// A square matrix acting on a [`CompositeSpace`].
///
/// Single-mode operators are always dense. Operators on composite spaces
/// whose total dimension exceeds [`SPARSE_CUTOFF`] are held in CSR form.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: CompositeSpace,
    repr: Repr,
}

fn prefers_sparse(space: &CompositeSpace) -> bool {
    !space.is_single_mode() && space.total_dim() > SPARSE_CUTOFF
}

impl Operator {
    pub fn from_dense(space: CompositeSpace, matrix: Array2<C64>) -> Result<Self> {
        let n = space.total_dim();
        if matrix.dim() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        let repr = if prefers_sparse(&space) {
            Repr::Sparse(CsrMatrix::from_dense(&matrix.view()))
        } else {
            Repr::Dense(matrix)
        };
        Ok(Self { space, repr })
    }

    pub fn from_csr(space: CompositeSpace, matrix: CsrMatrix) -> Result<Self> {
        let n = space.total_dim();
        if matrix.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.dim(),
            });
        }
        let repr = if prefers_sparse(&space) {
            Repr::Sparse(matrix)
        } else {
            Repr::Dense(matrix.to_dense())
        };
        Ok(Self { space, repr })
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let n = space.total_dim();
        Self::from_csr(space, CsrMatrix::identity(n)).expect("identity matches its space")
    }

    pub fn zeros(space: CompositeSpace) -> Self {
        let n = space.total_dim();
        Self::from_csr(space, CsrMatrix::zeros(n)).expect("zero matches its space")
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.repr, Repr::Sparse(_))
    }

    pub fn to_dense(&self) -> Cow<'_, Array2<C64>> {
        match &self.repr {
            Repr::Dense(m) => Cow::Borrowed(m),
            Repr::Sparse(s) => Cow::Owned(s.to_dense()),
        }
    }

    pub fn to_csr(&self) -> Cow<'_, CsrMatrix> {
        match &self.repr {
            Repr::Dense(m) => Cow::Owned(CsrMatrix::from_dense(&m.view())),
            Repr::Sparse(s) => Cow::Borrowed(s),
        }
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(linalg::dagger(&m.view())),
            Repr::Sparse(s) => Repr::Sparse(s.adjoint()),
        };
        Self {
            space: self.space.clone(),
            repr,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m.mapv(|z| z * s)),
            Repr::Sparse(m) => Repr::Sparse(m.scale(s)),
        };
        Self {
            space: self.space.clone(),
            repr,
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn try_add(&self, other: &Operator) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => Repr::Dense(a + b),
            _ => Repr::Sparse(self.to_csr().add(&other.to_csr())),
        };
        Ok(Self {
            space: self.space.clone(),
            repr,
        })
    }

    pub fn try_mul(&self, other: &Operator) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => Repr::Dense(a.dot(b)),
            _ => Repr::Sparse(self.to_csr().matmul(&other.to_csr())),
        };
        Ok(Self {
            space: self.space.clone(),
            repr,
        })
    }

    pub fn commutator(&self, other: &Operator) -> Result<Self> {
        Ok(self.try_mul(other)? - other.try_mul(self)?)
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Operator::identity(self.space.clone());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Array1<C64>) -> Result<Array1<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(match &self.repr {
            Repr::Dense(m) => m.dot(v),
            Repr::Sparse(s) => {
                let mut out = Array1::zeros(v.len());
                for (r, c, val) in s.iter() {
                    out[r] += val * v[c];
                }
                out
            }
        })
    }

    pub fn hermiticity_error(&self) -> f64 {
        match &self.repr {
            Repr::Dense(m) => linalg::hermiticity_error(&m.view()),
            Repr::Sparse(s) => {
                let d = s.add(&s.adjoint().scale(C64::new(-1.0, 0.0)));
                d.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
            }
        }
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        linalg::max_abs_diff(&self.to_dense().view(), &other.to_dense().view())
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        self.to_csr().max_row_sum()
    }

    /// Kronecker product; the result lives on the concatenated mode list.
    pub fn kron(&self, other: &Operator) -> Self {
        let mut modes = self.space.modes().to_vec();
        modes.extend_from_slice(other.space.modes());
        let space = CompositeSpace::new(modes).expect("non-empty");
        let csr = self.to_csr().kron(&other.to_csr());
        Self::from_csr(space, csr).expect("kron dimensions agree")
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator spaces must match")
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_add(&rhs.scale_real(-1.0))
            .expect("operator spaces must match")
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator spaces must match")
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Annihilation,
    Creation,
    Number,
    Identity,
}

/// Ladder operators on a single truncated mode.
///
/// `<n-1|a|n> = sqrt(n)`; the creation operator is its adjoint, so `[a, a^dagger] = 1`
/// holds everywhere except the last Fock level.
pub fn ladder(space: ModeSpace, which: Ladder) -> Operator {
    let n = space.dim();
    let mut m = Array2::<C64>::zeros((n, n));
    match which {
        Ladder::Annihilation => {
            for k in 1..n {
                m[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
            }
        }
        Ladder::Creation => {
            for k in 1..n {
                m[[k, k - 1]] = C64::new((k as f64).sqrt(), 0.0);
            }
        }
        Ladder::Number => {
            for k in 0..n {
                m[[k, k]] = C64::new(k as f64, 0.0);
            }
        }
        Ladder::Identity => {
            for k in 0..n {
                m[[k, k]] = C64::new(1.0, 0.0);
            }
        }
    }
    Operator::from_dense(space.into(), m).expect("ladder shape")
}

pub fn annihilation(space: ModeSpace) -> Operator {
    ladder(space, Ladder::Annihilation)
}

pub fn creation(space: ModeSpace) -> Operator {
    ladder(space, Ladder::Creation)
}

pub fn number(space: ModeSpace) -> Operator {
    ladder(space, Ladder::Number)
}

/// Photon-number parity `(-1)^{a^dagger a}`.
pub fn parity(space: ModeSpace) -> Operator {
    let n = space.dim();
    let diag = Array1::from_shape_fn(n, |k| C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
    Operator::from_dense(space.into(), Array2::from_diag(&diag)).expect("parity shape")
}

/// Position quadrature `q = (a + a^dagger)/sqrt(2)`.
pub fn position(space: ModeSpace) -> Operator {
    (&annihilation(space) + &creation(space)).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// Momentum quadrature `p = (a - a^dagger)/(i sqrt(2))`.
pub fn momentum(space: ModeSpace) -> Operator {
    (&annihilation(space) - &creation(space))
        .scale(C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2))
}

/// Places a single-mode operator at `position` of `target`, identity elsewhere.
pub fn embed(op: &Operator, target: &CompositeSpace, position: usize) -> Result<Operator> {
    let mode = target.mode(position).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "mode index {position} out of range for {} modes",
            target.num_modes()
        ))
    })?;
    if !op.space().is_single_mode() {
        return Err(Error::InvalidParameter(
            "embed expects a single-mode operator".into(),
        ));
    }
    if op.dim() != mode.dim() {
        return Err(Error::DimensionMismatch {
            expected: mode.dim(),
            found: op.dim(),
        });
    }
    let factors: Vec<Operator> = target
        .modes()
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            if i == position {
                op.clone()
            } else {
                ladder(m, Ladder::Identity)
            }
        })
        .collect();
    tensor(&factors)
}

/// Kronecker product of single- or multi-mode factors in the given order.
pub fn tensor(factors: &[Operator]) -> Result<Operator> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("tensor product of zero factors".into()))?;
    let mut space_modes = first.space().modes().to_vec();
    let mut csr = first.to_csr().into_owned();
    for f in rest {
        space_modes.extend_from_slice(f.space().modes());
        csr = csr.kron(&f.to_csr());
    }
    Operator::from_csr(CompositeSpace::new(space_modes)?, csr)
}

/// Displacement `D(eta) = exp(eta a^dagger - eta^* a)`.
pub fn displacement(space: ModeSpace, eta: C64) -> Result<Operator> {
    check_truncation(space.dim(), eta.norm(), 0.0)?;
    let a = annihilation(space);
    let ad = creation(space);
    let generator = &ad.scale(eta) - &a.scale(eta.conj());
    let u = linalg::expm_anti_hermitian(&generator.to_dense().view())?;
    Operator::from_dense(space.into(), u)
}

/// Squeeze `S(zeta) = exp[(zeta a^dagger^2 - zeta^* a^2)/2]`.
///
/// With this sign convention `S(r)^dagger |0>` (equivalently `S(-r)|0>`) for real
/// `r > 0` has position variance `e^{-2r}/2`.
pub fn squeeze(space: ModeSpace, zeta: C64) -> Result<Operator> {
    check_truncation(space.dim(), 0.0, zeta.norm())?;
    let a = annihilation(space);
    let a2 = &a * &a;
    let ad2 = a2.adjoint();
    let generator = (&ad2.scale(zeta) - &a2.scale(zeta.conj())).scale_real(0.5);
    let u = linalg::expm_anti_hermitian(&generator.to_dense().view())?;
    Operator::from_dense(space.into(), u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(d: usize) -> ModeSpace {
        ModeSpace::new(d).unwrap()
    }

    fn unitarity_error(u: &Operator) -> f64 {
        let p = &u.adjoint() * u;
        p.max_abs_diff(&Operator::identity(u.space().clone()))
    }

    #[test]
    fn annihilation_lowers_fock_states() {
        let a = annihilation(mode(5));
        let mut one = Array1::zeros(5);
        one[1] = C64::new(1.0, 0.0);
        let out = a.apply(&one).unwrap();
        assert_eq!(out[0], C64::new(1.0, 0.0));
        assert!(out.iter().skip(1).all(|z| z.norm() == 0.0));

        let mut vac = Array1::zeros(5);
        vac[0] = C64::new(1.0, 0.0);
        assert!(a.apply(&vac).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn creation_is_adjoint_and_adjoint_involutive() {
        let m = mode(7);
        assert_eq!(creation(m), annihilation(m).adjoint());
        let x = displacement(m, C64::new(0.3, -0.2)).unwrap();
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn canonical_commutator_below_cutoff() {
        let m = mode(12);
        let c = annihilation(m).commutator(&creation(m)).unwrap();
        let c = c.to_dense();
        for i in 0..11 {
            for j in 0..11 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((c[[i, j]] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        // The truncation artifact sits in the last level.
        assert!((c[[11, 11]].re + 11.0).abs() < 1e-12);
    }

    #[test]
    fn embed_identity_and_number() {
        let target = CompositeSpace::from_dims(&[2, 2]).unwrap();
        let id = embed(&ladder(mode(2), Ladder::Identity), &target, 1).unwrap();
        assert_eq!(id, Operator::identity(target.clone()));

        let n0 = embed(&number(mode(2)), &target, 0).unwrap();
        let d = n0.to_dense();
        let diag: Vec<f64> = d.diag().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn embedded_distinct_modes_commute() {
        let target = CompositeSpace::from_dims(&[4, 3]).unwrap();
        let a = embed(&annihilation(mode(4)), &target, 0).unwrap();
        let bd = embed(&creation(mode(3)), &target, 1).unwrap();
        let c = a.commutator(&bd).unwrap();
        assert!(c.to_dense().iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn embed_rejects_mismatch() {
        let target = CompositeSpace::from_dims(&[4, 3]).unwrap();
        assert!(matches!(
            embed(&annihilation(mode(5)), &target, 0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(embed(&annihilation(mode(4)), &target, 2).is_err());
    }

    #[test]
    fn large_composites_are_sparse() {
        let big = CompositeSpace::from_dims(&[20, 4, 4]).unwrap();
        let small = CompositeSpace::from_dims(&[20, 4, 3]).unwrap();
        assert!(embed(&annihilation(mode(20)), &big, 0).unwrap().is_sparse());
        assert!(!embed(&annihilation(mode(20)), &small, 0).unwrap().is_sparse());
        assert!(!annihilation(mode(400)).is_sparse());
    }

    #[test]
    fn displacement_zero_is_identity() {
        let m = mode(10);
        let d = displacement(m, C64::new(0.0, 0.0)).unwrap();
        assert!(d.max_abs_diff(&Operator::identity(m.into())) < 1e-14);
    }

    #[test]
    fn displaced_vacuum_is_poissonian() {
        let m = mode(30);
        let d = displacement(m, C64::new(1.0, 0.0)).unwrap();
        let col = d.to_dense().column(0).to_owned();
        let mut fact = 1.0;
        for n in 0..3 {
            if n > 0 {
                fact *= n as f64;
            }
            let expected = (-1.0f64).exp() / fact;
            assert!((col[n].norm_sqr() - expected).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn displacement_inverse_and_unitary() {
        let m = mode(40);
        let eta = C64::new(1.2, -0.7);
        let d = displacement(m, eta).unwrap();
        let dm = displacement(m, -eta).unwrap();
        assert!((&d * &dm).max_abs_diff(&Operator::identity(m.into())) < 1e-10);
        assert!(unitarity_error(&d) < 1e-8);
    }

    #[test]
    fn displacement_guard() {
        assert!(matches!(
            displacement(mode(10), C64::new(3.0, 0.0)),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn squeeze_zero_is_identity() {
        let m = mode(10);
        let s = squeeze(m, C64::new(0.0, 0.0)).unwrap();
        assert!(s.max_abs_diff(&Operator::identity(m.into())) < 1e-14);
    }

    #[test]
    fn inverse_squeezed_vacuum_quadrature_variances() {
        let m = mode(120);
        let r = 1.1;
        let s_dag = squeeze(m, C64::new(r, 0.0)).unwrap().adjoint();
        assert!(unitarity_error(&s_dag) < 1e-8);
        let mut vac = Array1::zeros(120);
        vac[0] = C64::new(1.0, 0.0);
        let psi = s_dag.apply(&vac).unwrap();
        let var = |op: &Operator| {
            let v = op.apply(&psi).unwrap();
            let mean: C64 = psi.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            let sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            sq - mean.norm_sqr()
        };
        assert!((var(&position(m)) - (-2.0 * r).exp() / 2.0).abs() < 1e-6);
        assert!((var(&momentum(m)) - (2.0 * r).exp() / 2.0).abs() < 1e-6);
    }
}
