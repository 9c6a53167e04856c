use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use sqcat::dynamics::*;
use sqcat::fock::*;
use sqcat::Error;

fn mode(d: usize) -> ModeSpace {
    ModeSpace::new(d).unwrap()
}

fn fock_dm(d: usize, n: usize) -> DensityMatrix {
    DensityMatrix::from_pure(&PureState::fock(mode(d), n).unwrap())
}

fn decay_model(d: usize, kappa: f64) -> LindbladModel {
    let mut m = LindbladModel::new(mode(d).into());
    m.add_dissipator(Dissipator::standard(annihilation(mode(d)), kappa).unwrap())
        .unwrap();
    m
}

fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_hermitian(n: usize, vals: &[f64]) -> Array2<C64> {
    let mut m = Array2::<C64>::zeros((n, n));
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            let re = vals[k % vals.len()];
            let im = if i == j { 0.0 } else { vals[(k + 7) % vals.len()] };
            m[[i, j]] = C64::new(re, im);
            m[[j, i]] = C64::new(re, -im);
            k += 1;
        }
    }
    m
}

/// Two-mode model with drive, a time-dependent exchange and a squeezed reservoir.
fn busy_model() -> LindbladModel {
    let space = CompositeSpace::from_dims(&[4, 3]).unwrap();
    let a = embed(&annihilation(mode(4)), &space, 0).unwrap();
    let b = embed(&annihilation(mode(3)), &space, 1).unwrap();
    let mut m = LindbladModel::new(space);
    m.add_term(HamiltonianTerm::new(&a.adjoint() * &a, Envelope::real(0.7)))
        .unwrap();
    m.add_with_hc(
        &(&a * &a) * &b.adjoint(),
        Envelope::Oscillating {
            amplitude: C64::new(0.3, -0.1),
            frequency: 2.5,
        },
    )
    .unwrap();
    m.add_with_hc(b.clone(), Envelope::Constant(C64::new(0.2, 0.4)))
        .unwrap();
    let n_env = 0.5f64.sinh().powi(2);
    let m_env = C64::from_polar(0.5f64.sinh() * 0.5f64.cosh(), 0.4);
    m.add_dissipator(Dissipator::squeezed(a.clone(), 0.3, n_env, m_env).unwrap())
        .unwrap();
    m.add_dissipator(Dissipator::standard(b, 1.0).unwrap()).unwrap();
    m.add_dissipator(Dissipator::standard(&a * &a, 0.2).unwrap()).unwrap();
    m
}

#[test]
fn empty_model_gives_zero() {
    let m = LindbladModel::new(mode(5).into());
    let d = rhs(&m, &fock_dm(5, 2), 0.0).unwrap();
    assert_eq!(max_abs(&d), 0.0);
}

#[test]
fn single_photon_decay_generator() {
    let kappa = 0.7;
    let d = rhs(&decay_model(4, kappa), &fock_dm(4, 1), 0.0).unwrap();
    let mut expected = Array2::<C64>::zeros((4, 4));
    expected[[0, 0]] = C64::new(kappa, 0.0);
    expected[[1, 1]] = C64::new(-kappa, 0.0);
    assert!(max_abs(&(&d - &expected)) < 1e-15);
}

#[test]
fn squeezed_reservoir_feeds_first_level() {
    let kappa = 1.3;
    let r: f64 = 0.5;
    let n_env = r.sinh().powi(2);
    let m_env = C64::new(r.sinh() * r.cosh(), 0.0);
    let mut m = LindbladModel::new(mode(4).into());
    m.add_dissipator(Dissipator::squeezed(annihilation(mode(4)), kappa, n_env, m_env).unwrap())
        .unwrap();
    let d = rhs(&m, &fock_dm(4, 0), 0.0).unwrap();
    assert!((d[[1, 1]].re - kappa * n_env).abs() < 1e-14);
    assert!((d[[0, 0]].re + kappa * n_env).abs() < 1e-14);
    // G[a^dagger] acting on the vacuum leaves a |2><0| coherence.
    let expected = kappa * m_env.conj() * 0.5 * 2f64.sqrt();
    assert!((d[[2, 0]] - expected).norm() < 1e-14);
}

#[test]
fn unphysical_reservoir_rejected() {
    let a = annihilation(mode(4));
    assert!(Dissipator::squeezed(a.clone(), 1.0, 0.1, C64::new(0.5, 0.0)).is_err());
    assert!(Dissipator::squeezed(a.clone(), 1.0, -0.1, C64::default()).is_err());
    assert!(Dissipator::standard(a, -1.0).is_err());
}

#[test]
fn squeezed_with_vacuum_reservoir_matches_standard() {
    let rho = DensityMatrix::from_pure(&PureState::coherent(mode(12), C64::new(0.6, 0.2)).unwrap());
    let std_model = decay_model(12, 0.9);
    let mut sq = LindbladModel::new(mode(12).into());
    sq.add_dissipator(Dissipator::squeezed(annihilation(mode(12)), 0.9, 0.0, C64::default()).unwrap())
        .unwrap();
    let d1 = rhs(&std_model, &rho, 0.0).unwrap();
    let d2 = rhs(&sq, &rho, 0.0).unwrap();
    assert!(max_abs(&(&d1 - &d2)) < 1e-15);
}

#[test]
fn superoperator_agrees_with_rhs() {
    let m = busy_model();
    let n = m.space().total_dim();
    let vals: Vec<f64> = (0..97).map(|k| ((k * 37 % 101) as f64 / 101.0) - 0.5).collect();
    let rho = DensityMatrix::from_raw(m.space().clone(), random_hermitian(n, &vals)).unwrap();
    for t in [0.0, 0.37, 1.9] {
        let d = rhs(&m, &rho, t).unwrap();
        let l = superoperator(&m, t);
        let v = Array1::from_shape_fn(n * n, |k| rho.matrix()[[k % n, k / n]]);
        let lv = l.dot(&v);
        for i in 0..n {
            for j in 0..n {
                assert!((lv[i + j * n] - d[[i, j]]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn hamiltonian_hermitian_at_all_times() {
    let m = busy_model();
    assert!(m.hermiticity_error(&[0.0, 0.123, 1.7, 40.3, 1000.1]) < 1e-10);
}

#[test]
fn single_photon_decay_trajectory() {
    let kappa = 1.0;
    let m = decay_model(4, kappa);
    let opts = EvolveOptions::uniform(5.0, m.max_dt(), 11);
    let obs = vec![("n".to_string(), Observable::Expectation(number(mode(4))))];
    let traj = evolve(&m, &fock_dm(4, 1), &obs, &opts).unwrap();
    for (t, n) in traj.times.iter().zip(traj.real_series("n").unwrap()) {
        assert!((n - (-kappa * t).exp()).abs() < 1e-6, "t = {t}");
    }
}

#[test]
fn free_rotation_of_coherent_state() {
    let omega = 1.7;
    let alpha = C64::new(1.0, 0.5);
    let mut m = LindbladModel::new(mode(30).into());
    m.add_term(HamiltonianTerm::new(number(mode(30)), Envelope::real(omega)))
        .unwrap();
    let rho0 = DensityMatrix::from_pure(&PureState::coherent(mode(30), alpha).unwrap());
    let opts = EvolveOptions::uniform(3.0, m.max_dt(), 7);
    let obs = vec![("a".to_string(), Observable::Expectation(annihilation(mode(30))))];
    let traj = evolve(&m, &rho0, &obs, &opts).unwrap();
    for (t, a) in traj.times.iter().zip(traj.series("a").unwrap()) {
        let expected = alpha * C64::new(0.0, -omega * t).exp();
        assert!((a - expected).norm() < 1e-6, "t = {t}");
    }
}

#[test]
fn two_photon_decay_trajectory() {
    let gamma = 0.4;
    let a = annihilation(mode(5));
    let mut m = LindbladModel::new(mode(5).into());
    m.add_dissipator(Dissipator::standard(&a * &a, gamma).unwrap()).unwrap();
    let opts = EvolveOptions::uniform(4.0, m.max_dt(), 9);
    let obs = vec![("n".to_string(), Observable::Expectation(number(mode(5))))];
    let traj = evolve(&m, &fock_dm(5, 2), &obs, &opts).unwrap();
    for (t, n) in traj.times.iter().zip(traj.real_series("n").unwrap()) {
        assert!((n - 2.0 * (-2.0 * gamma * t).exp()).abs() < 1e-6, "t = {t}");
    }
}

#[test]
fn step_contract_enforced() {
    let m = decay_model(4, 1.0);
    let opts = EvolveOptions::uniform(1.0, 2.0 * m.max_dt(), 2);
    let err = evolve(&m, &fock_dm(4, 1), &[], &opts).unwrap_err();
    assert!(matches!(err, Error::StepSize { .. }));
}

#[test]
fn sample_times_snap_to_grid() {
    let m = decay_model(4, 1.0);
    let dt = m.max_dt() / 1.5;
    let opts = EvolveOptions {
        t_final: 1.0,
        dt,
        sample_times: vec![0.5, 0.0, 0.5 + 1e-9, 1.0],
        snapshot_times: vec![0.25],
    };
    let traj = evolve(&m, &fock_dm(4, 1), &[("tr".into(), Observable::Trace)], &opts).unwrap();
    assert_eq!(traj.times.len(), 3);
    assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    assert!(traj.dt <= dt);
    assert!((traj.times[2] - 1.0).abs() < 1e-12);
    assert_eq!(traj.snapshots.len(), 1);
    assert!((traj.snapshots[0].0 - 0.25).abs() <= traj.dt / 2.0 + 1e-12);
}

#[test]
fn purity_bounded_and_dt_converged() {
    let m = busy_model();
    let rho0 = DensityMatrix::from_pure(&PureState::vacuum(m.space().clone()));
    let obs = vec![
        ("purity".to_string(), Observable::Purity),
        ("trace".to_string(), Observable::Trace),
    ];
    let mut opts = EvolveOptions::uniform(4.0, m.max_dt(), 41);
    opts.snapshot_times = vec![1.0, 4.0];
    let traj = evolve(&m, &rho0, &obs, &opts).unwrap();
    assert!(traj.real_series("purity").unwrap().iter().all(|&p| p <= 1.0 + 1e-8));
    for (_, s) in &traj.snapshots {
        assert!((s.trace().re - 1.0).abs() <= 1e-6);
        s.validate(1e-6).unwrap();
    }
    let rel = dt_convergence(&m, &rho0, &obs, &opts).unwrap();
    assert!(rel <= 1e-5, "relative change {rel:e}");
}

#[test]
fn decay_steady_state_is_vacuum() {
    let ss = steady_state(&decay_model(6, 1.0), None).unwrap();
    assert_eq!(ss.multiplicity, 1);
    assert!((ss.rho.matrix()[[0, 0]].re - 1.0).abs() < 1e-10);
    assert!(ss.residual <= 1e-10);
}

#[test]
fn two_photon_loss_needs_hint() {
    let a = annihilation(mode(8));
    let mut m = LindbladModel::new(mode(8).into());
    m.add_dissipator(Dissipator::standard(&a * &a, 1.0).unwrap()).unwrap();
    assert!(matches!(
        steady_state(&m, None),
        Err(Error::NullSpaceMultiplicity { multiplicity: 4 })
    ));
    let even = steady_state(&m, Some(&SteadyStateHint::Even)).unwrap();
    assert!((even.rho.matrix()[[0, 0]].re - 1.0).abs() < 1e-10);
    let odd = steady_state(&m, Some(&SteadyStateHint::Odd)).unwrap();
    assert!((odd.rho.matrix()[[1, 1]].re - 1.0).abs() < 1e-10);
    // An equal mixture of |2> and |3> keeps half its weight in each parity sector.
    let mix = DensityMatrix::mixture(&[(0.5, fock_dm(8, 2)), (0.5, fock_dm(8, 3))]).unwrap();
    let ss = steady_state(&m, Some(&SteadyStateHint::Initial(mix))).unwrap();
    assert!((ss.rho.matrix()[[0, 0]].re - 0.5).abs() < 1e-10);
    assert!((ss.rho.matrix()[[1, 1]].re - 0.5).abs() < 1e-10);
}

#[test]
fn steady_state_is_fixed_point_of_evolution() {
    let space = CompositeSpace::from(mode(8));
    let a = annihilation(mode(8));
    let mut m = LindbladModel::new(space);
    m.add_with_hc(a.clone(), Envelope::Constant(C64::new(0.3, 0.1))).unwrap();
    m.add_term(HamiltonianTerm::new(number(mode(8)), Envelope::real(0.5))).unwrap();
    m.add_dissipator(Dissipator::standard(a, 1.0).unwrap()).unwrap();
    let ss = steady_state(&m, None).unwrap();
    assert!(ss.residual <= 1e-10);
    let traj = evolve(&m, &ss.rho, &[], &EvolveOptions::uniform(10.0, m.max_dt(), 2)).unwrap();
    let diff = linalg::max_abs_diff(&traj.final_state.matrix().view(), &ss.rho.matrix().view());
    assert!(diff <= 1e-6);
}

#[test]
fn time_dependent_model_has_no_steady_state() {
    assert!(steady_state(&busy_model(), None).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rhs_is_traceless_and_hermitian(vals in prop::collection::vec(-1.0f64..1.0, 20..80), t in 0.0f64..10.0) {
        let m = busy_model();
        let n = m.space().total_dim();
        let rho = DensityMatrix::from_raw(m.space().clone(), random_hermitian(n, &vals)).unwrap();
        let d = rhs(&m, &rho, t).unwrap();
        let tr: C64 = d.diag().iter().sum();
        prop_assert!(tr.norm() < 1e-10);
        prop_assert!(linalg::hermiticity_error(&d.view()) < 1e-10);
    }
}
