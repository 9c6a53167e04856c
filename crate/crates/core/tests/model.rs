use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use sqcat::dynamics::*;
use sqcat::fock::*;
use sqcat::model::*;
use sqcat::Error;

fn reference(alpha: f64, r: f64, g: f64) -> SystemParams {
    params_for_target(alpha, r, g, &BaseParams::reference()).unwrap()
}

fn mode(d: usize) -> ModeSpace {
    ModeSpace::new(d).unwrap()
}

#[test]
fn no_two_photon_drive_means_no_squeezing() {
    let p = SystemParams {
        omega_1: 0.0,
        ..reference(2.0, 1.1, 0.1)
    };
    let d = derive_params(&p).unwrap();
    assert_eq!(d.r, 0.0);
    assert_eq!(d.g_p, 0.0);
    assert_eq!(d.g_three_wave, 0.0);
    assert_eq!(d.omega_sa, p.delta_a);
    assert!(d.alpha.is_none());
}

#[test]
fn squeeze_divergence_reported() {
    let p = SystemParams {
        omega_1: 50.0,
        ..reference(2.0, 1.1, 0.1)
    };
    assert!(matches!(derive_params(&p), Err(Error::SqueezeDivergence { .. })));
}

#[test]
fn reference_chain_values() {
    let p = reference(2.0, 1.1, 0.1);
    assert!((p.omega_1 - 50.0 * 2.2f64.tanh()).abs() < 1e-12);
    assert!((p.omega_1 - 48.787).abs() < 1e-3);
    assert!((p.omega_2 - 0.4).abs() < 1e-15);
    assert_eq!(p.phi_2, PI);
    let d = derive_params(&p).unwrap();
    assert!((d.r - 1.1).abs() < 1e-9);
    assert!((d.omega_sa - 100.0 / 2.2f64.cosh()).abs() < 1e-9);
    assert!((d.omega_sa - 21.892).abs() < 1e-3);
    assert!((p.delta_b - 43.784).abs() < 1e-3);
    let eta = 2.0 * 0.1 / (1e-3 * 2.2f64.sinh());
    assert!((d.eta_s.re - eta).abs() < 1e-9 && d.eta_s.im.abs() < 1e-9);
    assert!((d.eta_s.re - 44.87).abs() < 1e-2);
    assert!((d.gamma_a - 0.04).abs() < 1e-12);
    let alpha = d.alpha.unwrap();
    assert!((alpha - C64::new(2.0, 0.0)).norm() < 1e-9);
    assert!(d.n_eff.abs() < 1e-12 && d.m_eff.norm() < 1e-12);
}

#[test]
fn gamma_is_four_g_squared() {
    for g in [0.05, 0.1, 0.2] {
        let d = derive_params(&reference(2.0, 1.1, g)).unwrap();
        assert!((d.gamma_a - 4.0 * g * g).abs() < 1e-12);
        assert!((d.g_three_wave - d.g_p * d.eta_s.re / 2.0).abs() < 1e-12);
    }
}

#[test]
fn infeasible_targets_rejected() {
    let base = BaseParams::reference();
    assert!(matches!(params_for_target(2.0, 0.0, 0.1, &base), Err(Error::Infeasible(_))));
    assert!(matches!(params_for_target(2.0, 1.1, 0.0, &base), Err(Error::Infeasible(_))));
    assert!(matches!(params_for_target(-1.0, 1.1, 0.1, &base), Err(Error::Infeasible(_))));
}

#[test]
fn matched_reservoir_cancels_noise() {
    assert_eq!(matched_reservoir(0.0), (0.0, C64::default()));
    let (n, m) = matched_reservoir(1.1);
    assert!((n - 1.1f64.sinh().powi(2)).abs() < 1e-15);
    assert!((m.re + 1.1f64.sinh() * 1.1f64.cosh()).abs() < 1e-12);
    let (n_eff, m_eff) = effective_reservoir(1.1, 1.1, PI);
    assert!(n_eff.abs() < 1e-12 && m_eff.norm() < 1e-12);
    let (n_eff, _) = effective_reservoir(1.1, 0.55, PI);
    assert!(n_eff > 0.0);
}

#[test]
fn exact_envelope_frequencies() {
    let p = reference(2.0, 1.1, 0.1);
    let w = nonresonant_frequencies(&p);
    let expected = [87.57, 481.6, -394.1, 43.78, -437.8];
    for (a, b) in w.iter().zip(expected) {
        assert!((a - b).abs() < 0.05, "{a} vs {b}");
    }
    let d = derive_params(&p).unwrap();
    let m = build_exact_model(&p, &d, [6, 3, 2]).unwrap();
    for f in w {
        assert!(envelope_frequencies(&m).contains(&f));
    }
    assert!(m.hermiticity_error(&[0.0]) < 1e-12);
    assert!(m.hermiticity_error(&[0.013, 0.77, 12.5]) < 1e-10);
}

#[test]
fn exact_tier_needs_resonance() {
    let mut p = reference(2.0, 1.1, 0.1);
    let d = derive_params(&p).unwrap();
    p.delta_b *= 1.01;
    p.drive_detuning_b = p.delta_b;
    assert!(build_exact_model(&p, &d, [6, 3, 2]).is_err());
}

#[test]
fn exact_without_rotating_terms_is_approx_times_identity() {
    let p = SystemParams {
        kappa_c: 0.0,
        ..reference(2.0, 1.1, 0.1)
    };
    let d = derive_params(&p).unwrap();
    let exact = build_exact_model_with(&p, &d, [6, 3, 2], false).unwrap();
    let approx = build_approx_model(&d, [6, 3]).unwrap();
    let id_c = ladder(mode(2), Ladder::Identity);
    let h_exact = exact.hamiltonian(0.0);
    let h_approx = approx.hamiltonian(0.0).kron(&id_c);
    assert!(h_exact.max_abs_diff(&h_approx) < 1e-14);
    let rho = DensityMatrix::from_pure(&PureState::product(&[
        PureState::coherent(mode(6), C64::new(0.3, 0.1)).unwrap(),
        PureState::fock(mode(3), 1).unwrap(),
        PureState::fock(mode(2), 0).unwrap(),
    ]).unwrap());
    let d1 = rhs(&exact, &rho, 0.0).unwrap();
    let rho_ab = partial_trace(&rho, &[0, 1]).unwrap();
    let d2 = rhs(&approx, &rho_ab, 0.0).unwrap();
    let rho_c = partial_trace(&rho, &[2]).unwrap();
    let expected = ndarray::Array2::from_shape_fn(d1.dim(), |(i, j)| d2[[i / 2, j / 2]] * rho_c.matrix()[[i % 2, j % 2]]);
    assert!(linalg::max_abs_diff(&d1.view(), &expected.view()) < 1e-13);
}

#[test]
fn vacuum_is_dark_without_drive() {
    let p = SystemParams {
        omega_2: 0.0,
        ..reference(2.0, 1.1, 0.1)
    };
    let d = derive_params(&p).unwrap();
    let m = build_reduced_model(&d, 0.0, 10).unwrap();
    let rho0 = DensityMatrix::from_pure(&PureState::vacuum(mode(10).into()));
    let traj = evolve(&m, &rho0, &[], &EvolveOptions::uniform(20.0, m.max_dt(), 2)).unwrap();
    assert!((traj.final_state.matrix()[[0, 0]].re - 1.0).abs() < 1e-14);
}

#[test]
fn reduced_model_reaches_even_cat() {
    let p = reference(2.0, 1.1, 0.1);
    let run = run_cat_generation(&p, Tier::Reduced, &[40], 200.0, 41, None).unwrap();
    let f = run.fidelity();
    assert!(*f.last().unwrap() >= 0.99, "{}", f.last().unwrap());
    let parity = run.trajectory.real_series("parity").unwrap();
    assert!(parity.iter().all(|x| (x - 1.0).abs() < 1e-6));
}

#[test]
fn single_photon_loss_limits_fidelity() {
    let p = SystemParams {
        kappa_a: 1e-3,
        ..reference(2.0, 1.1, 0.1)
    };
    let run = run_cat_generation(&p, Tier::Reduced, &[30], 150.0, 301, None).unwrap();
    let peak = run.fidelity().iter().cloned().fold(0.0, f64::max);
    assert!((peak - 0.96).abs() <= 0.02, "peak {peak}");
}

#[test]
fn larger_coupling_is_faster() {
    let times: Vec<f64> = [0.05, 0.1, 0.2]
        .iter()
        .map(|&g| {
            let run = run_cat_generation(&reference(2.0, 1.1, g), Tier::Reduced, &[30], 150.0, 601, None).unwrap();
            first_crossing(&run.trajectory.times, &run.fidelity(), 0.95).unwrap()
        })
        .collect();
    assert!(times[0] > times[1] && times[1] > times[2], "{times:?}");
}

#[test]
fn steady_states_follow_parity() {
    let d = derive_params(&reference(2.0, 1.1, 0.1)).unwrap();
    let m = build_reduced_model(&d, 0.0, 40).unwrap();
    assert!(matches!(steady_state(&m, None), Err(Error::NullSpaceMultiplicity { multiplicity: 4 })));
    let alpha = C64::new(2.0, 0.0);
    let even = steady_state(&m, Some(&SteadyStateHint::Even)).unwrap();
    assert!(fidelity(&even.rho, &cat_state(mode(40), alpha, CatKind::Even).unwrap()).unwrap() >= 0.999);
    assert!(even.residual <= 1e-10, "{}", even.residual);
    let odd = steady_state(&m, Some(&SteadyStateHint::Odd)).unwrap();
    assert!(fidelity(&odd.rho, &cat_state(mode(40), alpha, CatKind::Odd).unwrap()).unwrap() >= 0.999);

    let mixed = DensityMatrix::mixture(&[
        (0.3, DensityMatrix::from_pure(&PureState::fock(mode(40), 2).unwrap())),
        (0.7, DensityMatrix::from_pure(&PureState::fock(mode(40), 1).unwrap())),
    ])
    .unwrap();
    let ss = steady_state(&m, Some(&SteadyStateHint::Initial(mixed))).unwrap();
    let p_even = fidelity(&ss.rho, &cat_state(mode(40), alpha, CatKind::Even).unwrap()).unwrap().powi(2);
    let p_odd = fidelity(&ss.rho, &cat_state(mode(40), alpha, CatKind::Odd).unwrap()).unwrap().powi(2);
    assert!((p_even - 0.3).abs() < 1e-3 && (p_odd - 0.7).abs() < 1e-3, "{p_even} {p_odd}");
}

#[test]
fn reduced_model_rejects_complex_drive() {
    let p = SystemParams {
        phi_2: 1.0,
        ..reference(2.0, 1.1, 0.1)
    };
    let d = derive_params(&p).unwrap();
    assert!(build_reduced_model(&d, 0.0, 20).is_err());
}

#[test]
fn rwa_report_cases() {
    let p = reference(2.0, 1.1, 0.1);
    let d = derive_params(&p).unwrap();
    let occ = Occupations { n_a: 4.0, n_b: 1.0, n_c: 1.0 };
    let rep = rwa_validity(&p, &d, occ);
    assert!(rep.pass(), "{rep:?}");
    let def = Occupations::defaults(&d);
    assert!((def.n_a - 4.0).abs() < 1e-12 && def.n_b == 1.0 && def.n_c == 1.0);

    let zero_g = SystemParams { g: 0.0, ..p };
    let dz = DerivedParams { g_s: 0.0, g_p: 0.0, ..d };
    let rep = rwa_validity(&zero_g, &dz, occ);
    assert!(rep.entries.iter().all(|e| e.ratio.is_infinite()) && rep.pass());

    let detuned = SystemParams {
        delta_b: d.g_p * d.eta_s.norm() * 4.0,
        ..p
    };
    let rep = rwa_validity(&detuned, &d, occ);
    assert!((rep.entries[0].ratio - 4.0).abs() < 1e-12);
    assert!(!rep.pass());
}

#[test]
fn scaled_detuning_preset_stays_valid() {
    let p = params_for_target(2.0, 1.1, 0.1, &BaseParams::scaled_detuning()).unwrap();
    let d = derive_params(&p).unwrap();
    assert!((p.delta_b - 8.757).abs() < 1e-3);
    assert!(rwa_validity(&p, &d, Occupations::defaults(&d)).pass());
}

#[test]
fn lifetime_values() {
    assert!((lifetime(2.0, 1e-3) - 125.0).abs() < 1e-9);
    assert_eq!(lifetime(1.0, 1.0), 0.5);
    assert!((lifetime(4.0, 1e-3) - 125.0 / 4.0).abs() < 1e-9);
}

#[test]
fn decayed_cat_limits() {
    let dim = 200;
    let secs = squeezed_cat(mode(dim), C64::new(2.0, 0.0), 1.1, CatKind::Even).unwrap();
    let rho0 = decayed_cat_density(2.0, 1.1, 1e-3, 0.0, dim).unwrap();
    assert!((fidelity(&rho0, &secs).unwrap() - 1.0).abs() < 1e-10);
    let late = decayed_cat_density(2.0, 1.1, 1e-3, 40.0 / 1e-3, dim).unwrap();
    let sv = squeezed_vacuum(1.1, dim).unwrap();
    assert!(linalg::max_abs_diff(&late.matrix().view(), &sv.matrix().view()) < 1e-8);
}

#[test]
fn decayed_cat_matches_integration() {
    let (dim, kappa) = (200, 1e-3);
    let frame_dim = 30;
    let mut m = LindbladModel::new(mode(frame_dim).into());
    m.add_dissipator(Dissipator::standard(annihilation(mode(frame_dim)), kappa).unwrap()).unwrap();
    let rho0 = DensityMatrix::from_pure(&cat_state(mode(frame_dim), C64::new(2.0, 0.0), CatKind::Even).unwrap());
    let opts = EvolveOptions {
        t_final: 500.0,
        dt: m.max_dt(),
        sample_times: vec![],
        snapshot_times: vec![10.0, 100.0, 500.0],
    };
    let traj = evolve(&m, &rho0, &[], &opts).unwrap();
    for (t, rho) in &traj.snapshots {
        let lab = to_lab_frame_dm(&rho.resize(mode(dim)).unwrap(), 1.1).unwrap();
        let closed = decayed_cat_density(2.0, 1.1, kappa, *t, dim).unwrap();
        let dist = trace_distance(&lab, &closed).unwrap();
        assert!(dist <= 1e-4, "t = {t}: {dist:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn target_round_trip(alpha in 0.5f64..4.0, r in 0.1f64..2.0, g in 0.01f64..0.5) {
        let p = reference(alpha, r, g);
        let d = derive_params(&p).unwrap();
        prop_assert!((d.r - r).abs() < 1e-10);
        prop_assert!((d.g_three_wave - g).abs() < 1e-10);
        prop_assert!((d.alpha.unwrap() - C64::new(alpha, 0.0)).norm() < 1e-10);
        prop_assert!(d.n_eff.abs() < 1e-10 && d.m_eff.norm() < 1e-10);
    }

    #[test]
    fn parity_conserved_without_single_photon_loss(t in 1.0f64..20.0) {
        let d = derive_params(&reference(1.5, 1.1, 0.1)).unwrap();
        let m = build_reduced_model(&d, 0.0, 24).unwrap();
        let rho0 = DensityMatrix::mixture(&[
            (0.4, DensityMatrix::from_pure(&PureState::fock(mode(24), 0).unwrap())),
            (0.6, DensityMatrix::from_pure(&PureState::fock(mode(24), 3).unwrap())),
        ]).unwrap();
        let obs = vec![("p".to_string(), Observable::Expectation(parity(mode(24))))];
        let traj = evolve(&m, &rho0, &obs, &EvolveOptions::uniform(t, m.max_dt(), 5)).unwrap();
        for x in traj.real_series("p").unwrap() {
            prop_assert!((x - (-0.2)).abs() < 1e-6);
        }
    }
}
