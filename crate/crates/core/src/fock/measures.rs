use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::linalg;
use super::operator::Operator;
use super::state::{DensityMatrix, PureState};
use super::space::CompositeSpace;
use crate::{Error, Result};

/// Borrowed view of either kind of state.
#[derive(Clone, Copy, Debug)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> StateRef<'a> {
    pub fn space(&self) -> &'a CompositeSpace {
        match self {
            StateRef::Pure(p) => p.space(),
            StateRef::Mixed(r) => r.space(),
        }
    }
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(p: &'a PureState) -> Self {
        StateRef::Pure(p)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        StateRef::Mixed(r)
    }
}

/// `Tr(A rho)` or `<psi|A|psi>`.
pub fn expectation<'a>(op: &Operator, state: impl Into<StateRef<'a>>) -> Result<C64> {
    let state = state.into();
    op.space().ensure_same(state.space())?;
    match state {
        StateRef::Pure(psi) => {
            let v = op.apply(psi.amplitudes())?;
            Ok(psi
                .amplitudes()
                .iter()
                .zip(v.iter())
                .map(|(a, b)| a.conj() * b)
                .sum())
        }
        StateRef::Mixed(rho) => {
            let m = rho.matrix();
            Ok(op.to_csr().iter().map(|(i, j, a)| a * m[[j, i]]).sum())
        }
    }
}

/// `<A^dagger A> - |<A>|^2`; for Hermitian `A` this is the usual variance.
pub fn variance<'a>(op: &Operator, state: impl Into<StateRef<'a>>) -> Result<f64> {
    let state = state.into();
    let mean = expectation(op, state)?;
    let second = expectation(&(&op.adjoint() * op), state)?;
    Ok(second.re - mean.norm_sqr())
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, in `[0, 1]`.
///
/// A pure target uses the equivalent `sqrt(<psi|rho|psi>)`.
pub fn fidelity<'a>(rho: &DensityMatrix, target: impl Into<StateRef<'a>>) -> Result<f64> {
    let target = target.into();
    rho.space().ensure_same(target.space())?;
    let f = match target {
        StateRef::Pure(psi) => {
            let v = psi.amplitudes();
            let w = rho.matrix().dot(v);
            let ov: C64 = v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
            ov.re.max(0.0).sqrt()
        }
        StateRef::Mixed(sigma) => {
            let s = linalg::sqrt_psd(&rho.matrix().view())?;
            let inner = s.dot(sigma.matrix()).dot(&s);
            linalg::eigvalsh(&inner.view())?
                .iter()
                .map(|&l| l.max(0.0).sqrt())
                .sum()
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Fidelity between two pure states, `|<psi|phi>|`.
pub fn pure_fidelity(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(psi.inner(phi)?.norm().min(1.0))
}

/// `0.5 * ||rho - sigma||_1`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.space().ensure_same(sigma.space())?;
    let d = rho.matrix() - sigma.matrix();
    Ok(0.5 * linalg::eigvalsh(&d.view())?.iter().map(|l| l.abs()).sum::<f64>())
}

/// Reduced state on the modes listed in `keep`, in ascending mode order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.space().dims();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidParameter("partial trace must keep at least one mode".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidParameter(format!(
            "mode index {bad} out of range for {} modes",
            dims.len()
        )));
    }
    if keep.len() == dims.len() {
        return Ok(rho.clone());
    }
    let n = rho.dim();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kept_total: usize = kept_dims.iter().product();

    // Split every full index into (kept index, traced index).
    let mut split = Vec::with_capacity(n);
    for idx in 0..n {
        let mut rem = idx;
        let mut digits = vec![0usize; dims.len()];
        for m in (0..dims.len()).rev() {
            digits[m] = rem % dims[m];
            rem /= dims[m];
        }
        let (mut ki, mut ti) = (0usize, 0usize);
        for m in 0..dims.len() {
            if keep.binary_search(&m).is_ok() {
                ki = ki * dims[m] + digits[m];
            } else {
                ti = ti * dims[m] + digits[m];
            }
        }
        split.push((ki, ti));
    }

    let m = rho.matrix();
    let mut out = Array2::<C64>::zeros((kept_total, kept_total));
    for i in 0..n {
        let (ki, ti) = split[i];
        for j in 0..n {
            let (kj, tj) = split[j];
            if ti == tj {
                out[[ki, kj]] += m[[i, j]];
            }
        }
    }
    let modes = keep.iter().map(|&k| rho.space().modes()[k]).collect();
    DensityMatrix::from_raw(CompositeSpace::new(modes)?, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::operator::{annihilation, creation, embed, number, position};
    use crate::fock::space::ModeSpace;
    use crate::fock::state::{cat_state, squeezed_cat, CatKind};
    use ndarray::Array1;

    fn mode(d: usize) -> ModeSpace {
        ModeSpace::new(d).unwrap()
    }

    #[test]
    fn number_expectation_of_coherent_state() {
        let m = mode(40);
        let psi = PureState::coherent(m, C64::new(2.0, 0.0)).unwrap();
        assert!((expectation(&number(m), &psi).unwrap().re - 4.0).abs() < 1e-6);
        let rho = DensityMatrix::from_pure(&psi);
        assert!((expectation(&number(m), &rho).unwrap().re - 4.0).abs() < 1e-6);
        assert!((variance(&number(m), &psi).unwrap() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_quadrature_variance() {
        let m = mode(10);
        let vac = PureState::vacuum(m.into());
        assert!((variance(&position(m), &vac).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let m = mode(60);
        let even = cat_state(m, C64::new(2.0, 0.0), CatKind::Even).unwrap();
        let odd = cat_state(m, C64::new(2.0, 0.0), CatKind::Odd).unwrap();
        let rho_e = DensityMatrix::from_pure(&even);
        assert!(fidelity(&rho_e, &odd).unwrap() < 1e-12);
        assert!((fidelity(&rho_e, &even).unwrap() - 1.0).abs() < 1e-12);
        assert!((fidelity(&rho_e, &rho_e).unwrap() - 1.0).abs() < 1e-6);

        let s = mode(3);
        let r0 = DensityMatrix::from_pure(&PureState::fock(s, 0).unwrap());
        assert_eq!(fidelity(&r0, &PureState::fock(s, 1).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn uhlmann_matches_pure_form_and_is_symmetric() {
        let m = mode(12);
        let psi = PureState::coherent(m, C64::new(0.4, 0.2)).unwrap();
        let phi = PureState::coherent(m, C64::new(-0.1, 0.3)).unwrap();
        let r0 = DensityMatrix::from_pure(&PureState::fock(m, 0).unwrap());
        let rho = DensityMatrix::mixture(&[(0.3, DensityMatrix::from_pure(&psi)), (0.7, r0)]).unwrap();
        let sigma = DensityMatrix::from_pure(&phi);
        let pure = fidelity(&rho, &phi).unwrap();
        let general = fidelity(&rho, &sigma).unwrap();
        let reversed = fidelity(&sigma, &rho).unwrap();
        assert!((pure - general).abs() < 1e-6);
        assert!((general - reversed).abs() < 1e-6);
    }

    #[test]
    fn squeezed_even_cat_mean_number() {
        let m = mode(200);
        let psi = squeezed_cat(m, C64::new(2.0, 0.0), 1.1, CatKind::Even).unwrap();
        let n = expectation(&number(m), &psi).unwrap().re;
        let x: f64 = 4.0;
        let expected = (1.1f64).sinh().powi(2) - x / x.cosh() * (2.2 - x).sinh();
        assert!((n - expected).abs() < 1e-6, "{n} vs {expected}");
    }

    #[test]
    fn odd_cat_mean_number() {
        let m = mode(60);
        let psi = squeezed_cat(m, C64::new(2.0, 0.0), 0.0, CatKind::Odd).unwrap();
        let n = expectation(&number(m), &psi).unwrap().re;
        assert!((n - 4.0 / 4.0f64.tanh()).abs() < 1e-8);
    }

    #[test]
    fn partial_trace_cases() {
        let mb = mode(2);
        let pa = PureState::new(
            mode(3).into(),
            Array1::from(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)]),
        )
        .unwrap();
        let ra = DensityMatrix::from_pure(&pa);
        let rb = DensityMatrix::from_pure(&PureState::fock(mb, 1).unwrap());
        let rab = DensityMatrix::product(&[ra.clone(), rb.clone()]).unwrap();
        let kept = partial_trace(&rab, &[0]).unwrap();
        assert!(linalg::max_abs_diff(&kept.matrix().view(), &ra.matrix().view()) < 1e-12);
        let kept_b = partial_trace(&rab, &[1]).unwrap();
        assert!(linalg::max_abs_diff(&kept_b.matrix().view(), &rb.matrix().view()) < 1e-12);
        assert_eq!(partial_trace(&rab, &[0, 1]).unwrap(), rab);
        assert!(partial_trace(&rab, &[2]).is_err());

        let space = CompositeSpace::from_dims(&[2, 2]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(
            space,
            Array1::from(vec![C64::new(h, 0.0), C64::default(), C64::default(), C64::new(h, 0.0)]),
        )
        .unwrap();
        let red = partial_trace(&DensityMatrix::from_pure(&bell), &[0]).unwrap();
        assert!((red.matrix()[[0, 0]].re - 0.5).abs() < 1e-15);
        assert!((red.matrix()[[1, 1]].re - 0.5).abs() < 1e-15);
        assert!(red.matrix()[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn sparse_expectation_matches_dense() {
        let space = CompositeSpace::from_dims(&[20, 4, 4]).unwrap();
        let a = embed(&annihilation(mode(20)), &space, 0).unwrap();
        let b = embed(&creation(mode(4)), &space, 1).unwrap();
        let op = &a * &b;
        assert!(op.is_sparse());
        let psi = PureState::product(&[
            PureState::coherent(mode(20), C64::new(1.0, 0.5)).unwrap(),
            PureState::new(
                mode(4).into(),
                Array1::from(vec![C64::new(0.8, 0.0), C64::new(0.0, 0.6), C64::default(), C64::default()]),
            )
            .unwrap(),
            PureState::fock(mode(4), 0).unwrap(),
        ])
        .unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let e1 = expectation(&op, &psi).unwrap();
        let e2 = expectation(&op, &rho).unwrap();
        assert!((e1 - e2).norm() < 1e-12);
    }
}
