use std::path::Path;

use serde_json::{json, Map, Value};
use sqcat::dynamics::{steady_state, SteadyStateHint};
use sqcat::fock::{
    cat_state, expectation, fidelity, number, parity, partial_trace, required_dim, CatKind, DensityMatrix, ModeSpace,
};
use sqcat::metrology::{
    brute_force_qfi, fit_scaling, optimize_qfi, qfi_analytic, qfi_numeric, qfi_of_simulated_state, FamilyKind,
    Optimum, StateFamily,
};
use sqcat::model::{
    build_model, derive_params, first_crossing, params_for_target, run_cat_generation_from, rwa_validity, BaseParams,
    DerivedParams, InitialState, Occupations, RwaReport, SystemParams, Tier,
};
use sqcat::wigner::{negativity_volume, wigner_analytic_secs, wigner_numeric, GridSpec, WignerGrid};
use sqcat::C64;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, num_object, opt_num, Echo, OutputDir};

const PHYSICS_KEYS: [&str; 21] = [
    "alpha",
    "r",
    "coupling",
    "preset",
    "delta_a",
    "g",
    "delta_c_ratio",
    "kappa_a",
    "kappa_b",
    "kappa_c",
    "delta_b",
    "delta_c",
    "omega_1",
    "omega_2",
    "omega_3",
    "phi_1",
    "phi_2",
    "phi_3",
    "r_env",
    "phi_env",
    "drive_detuning_b",
];

fn allowed(extra: &[&'static str]) -> Vec<&'static str> {
    PHYSICS_KEYS.iter().chain(extra).copied().collect()
}

/// Runs one scenario and writes its files into `out`.
pub fn run(cfg: &RunConfig, out: &Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    let mut dir = OutputDir::create(out)?;
    match cfg.scenario() {
        "derive" => derive(cfg, &mut dir)?,
        "simulate" => simulate(cfg, &mut dir)?,
        "steady" => steady(cfg, &mut dir)?,
        "wigner" => wigner(cfg, &mut dir)?,
        "qfi" => qfi(cfg, &mut dir)?,
        "optimize" => optimize(cfg, &mut dir)?,
        "fit" => fit(cfg, &mut dir)?,
        other => return Err(CliError::Config(format!("unknown scenario '{other}'"))),
    }
    Ok(dir.written().to_vec())
}

struct Physics {
    system: SystemParams,
    derived: DerivedParams,
}

fn physics(cfg: &RunConfig) -> Result<Physics, CliError> {
    let alpha = cfg.f64("alpha", 2.0)?;
    let r = cfg.f64("r", 1.1)?;
    let coupling = cfg.f64("coupling", 0.1)?;
    let preset: String = cfg.get("preset", "reference".to_string())?;
    let mut base = match preset.as_str() {
        "reference" => BaseParams::reference(),
        "scaled" => BaseParams::scaled_detuning(),
        other => {
            return Err(CliError::Config(format!(
                "unknown preset '{other}' (expected reference or scaled)"
            )))
        }
    };
    base.delta_a = cfg.f64("delta_a", base.delta_a)?;
    base.g = cfg.f64("g", base.g)?;
    base.delta_c_ratio = cfg.f64("delta_c_ratio", base.delta_c_ratio)?;
    base.kappa_a = cfg.f64("kappa_a", base.kappa_a)?;
    base.kappa_b = cfg.f64("kappa_b", base.kappa_b)?;
    base.kappa_c = cfg.f64("kappa_c", base.kappa_c)?;
    let mut p = params_for_target(alpha, r, coupling, &base)?;
    let overrides = [
        ("delta_b", &mut p.delta_b),
        ("delta_c", &mut p.delta_c),
        ("omega_1", &mut p.omega_1),
        ("omega_2", &mut p.omega_2),
        ("omega_3", &mut p.omega_3),
        ("phi_1", &mut p.phi_1),
        ("phi_2", &mut p.phi_2),
        ("phi_3", &mut p.phi_3),
        ("r_env", &mut p.r_env),
        ("phi_env", &mut p.phi_env),
        ("drive_detuning_b", &mut p.drive_detuning_b),
    ];
    for (key, field) in overrides {
        if let Some(v) = cfg.opt_f64(key)? {
            *field = v;
        }
    }
    let derived = derive_params(&p)?;
    Ok(Physics { system: p, derived })
}

fn system_pairs(p: &SystemParams) -> Vec<(String, f64)> {
    [
        ("delta_a", p.delta_a),
        ("delta_b", p.delta_b),
        ("delta_c", p.delta_c),
        ("g", p.g),
        ("omega_1", p.omega_1),
        ("omega_2", p.omega_2),
        ("omega_3", p.omega_3),
        ("phi_1", p.phi_1),
        ("phi_2", p.phi_2),
        ("phi_3", p.phi_3),
        ("kappa_a", p.kappa_a),
        ("kappa_b", p.kappa_b),
        ("kappa_c", p.kappa_c),
        ("r_env", p.r_env),
        ("phi_env", p.phi_env),
        ("drive_detuning_b", p.drive_detuning_b),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn derived_pairs(d: &DerivedParams) -> Vec<(String, f64)> {
    let mut v = vec![
        ("eta_s_re", d.eta_s.re),
        ("eta_s_im", d.eta_s.im),
        ("r", d.r),
        ("omega_sa", d.omega_sa),
        ("g_s", d.g_s),
        ("g_p", d.g_p),
        ("g_complex_re", d.g_complex.re),
        ("g_complex_im", d.g_complex.im),
        ("g_three_wave", d.g_three_wave),
        ("gamma_a", d.gamma_a),
        ("j_eff_re", d.j_eff.re),
        ("j_eff_im", d.j_eff.im),
    ];
    if let Some(a) = d.alpha {
        v.push(("alpha_re", a.re));
        v.push(("alpha_im", a.im));
    }
    v.extend([
        ("n_eff", d.n_eff),
        ("m_eff_re", d.m_eff.re),
        ("m_eff_im", d.m_eff.im),
        ("omega_2", d.omega_2),
        ("phi_2", d.phi_2),
        ("kappa_a", d.kappa_a),
        ("kappa_b", d.kappa_b),
        ("kappa_c", d.kappa_c),
    ]);
    v.into_iter().map(|(k, x)| (k.to_string(), x)).collect()
}

/// Echo lines and JSON preamble with the resolved configuration and, when present, the physics.
fn preamble(cfg: &RunConfig, phys: Option<&Physics>) -> (Echo, Map<String, Value>) {
    let resolved = cfg.resolved();
    let mut echo = Echo::default();
    for (k, v) in &resolved {
        echo.push(format!("config.{k}"), v.clone());
    }
    let mut body = Map::new();
    body.insert(
        "config".into(),
        Value::Object(resolved.into_iter().map(|(k, v)| (k, Value::String(v))).collect()),
    );
    if let Some(ph) = phys {
        let sys = system_pairs(&ph.system);
        let der = derived_pairs(&ph.derived);
        echo.extend("system", &sys);
        echo.extend("derived", &der);
        body.insert("system".into(), num_object(&sys));
        body.insert("derived".into(), num_object(&der));
    }
    (echo, body)
}

fn rwa_report(ph: &Physics) -> RwaReport {
    rwa_validity(&ph.system, &ph.derived, Occupations::defaults(&ph.derived))
}

fn rwa_json(report: &RwaReport) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "label": e.label,
                "large": num(e.large),
                "small": num(e.small),
                "ratio": num(e.ratio),
            })
        })
        .collect();
    json!({
        "pass": report.pass(),
        "threshold": num(report.threshold),
        "min_ratio": num(report.min_ratio()),
        "occupations": {
            "n_a": num(report.occupations.n_a),
            "n_b": num(report.occupations.n_b),
            "n_c": num(report.occupations.n_c),
        },
        "entries": entries,
    })
}

fn check_rwa(cfg: &RunConfig, report: &RwaReport) -> Result<(), CliError> {
    if cfg.bool("strict_rwa", false)? && !report.pass() {
        return Err(CliError::Physics(format!(
            "rotating-wave validity check failed: smallest ratio {:.3} below {}",
            report.min_ratio(),
            report.threshold
        )));
    }
    Ok(())
}

fn derive(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&allowed(&["strict_rwa"]))?;
    let ph = physics(cfg)?;
    let report = rwa_report(&ph);
    check_rwa(cfg, &report)?;
    let (echo, mut body) = preamble(cfg, Some(&ph));
    body.insert("rwa".into(), rwa_json(&report));
    let rows: Vec<(String, Vec<f64>)> = system_pairs(&ph.system)
        .into_iter()
        .map(|(k, v)| (format!("system.{k}"), vec![v]))
        .chain(derived_pairs(&ph.derived).into_iter().map(|(k, v)| (format!("derived.{k}"), vec![v])))
        .collect();
    dir.labelled_csv("derive.csv", &echo, &["quantity", "value"], &rows)?;
    let rwa_rows: Vec<(String, Vec<f64>)> = report
        .entries
        .iter()
        .map(|e| (e.label.to_string(), vec![e.large, e.small, e.ratio]))
        .collect();
    dir.labelled_csv("rwa.csv", &echo, &["term", "large", "small", "ratio"], &rwa_rows)?;
    dir.json("derive.json", body)
}

fn tier_and_dims(cfg: &RunConfig) -> Result<(Tier, Vec<usize>), CliError> {
    let tier: Tier = cfg.get("tier", Tier::Reduced)?;
    let dims = cfg.usize_list("dims", &tier.default_dims())?;
    if dims.len() != tier.num_modes() {
        return Err(CliError::Config(format!(
            "tier {tier} needs {} truncations in 'dims', got {}",
            tier.num_modes(),
            dims.len()
        )));
    }
    Ok((tier, dims))
}

fn simulate(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&allowed(&["tier", "dims", "t_final", "samples", "dt", "initial", "strict_rwa"]))?;
    let ph = physics(cfg)?;
    let (tier, dims) = tier_and_dims(cfg)?;
    let t_final = cfg.f64("t_final", 200.0)?;
    let samples: usize = cfg.get("samples", 201)?;
    let dt = cfg.opt_f64("dt")?;
    let initial: InitialState = cfg.get("initial", InitialState::Vacuum)?;
    let report = rwa_report(&ph);
    check_rwa(cfg, &report)?;

    let run = run_cat_generation_from(&ph.system, initial, tier, &dims, t_final, samples, dt)?;
    let traj = &run.trajectory;
    let series = |name: &str| traj.real_series(name).expect("recorded observable");
    let (fid, n_a, par) = (series("fidelity"), series("n_a"), series("parity"));
    let rows: Vec<Vec<f64>> = (0..traj.times.len())
        .map(|k| vec![traj.times[k], fid[k], n_a[k], par[k]])
        .collect();

    let (echo, mut body) = preamble(cfg, Some(&ph));
    dir.csv("trajectory.csv", &echo, &["t", "fidelity", "n_a", "parity"], &rows)?;
    let last = |v: &[f64]| v.last().copied().unwrap_or(f64::NAN);
    body.insert("rwa".into(), rwa_json(&report));
    body.insert(
        "result".into(),
        json!({
            "final_fidelity": num(last(&fid)),
            "max_fidelity": num(fid.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            "time_to_fidelity_0_95": opt_num(first_crossing(&traj.times, &fid, 0.95)),
            "time_to_fidelity_0_99": opt_num(first_crossing(&traj.times, &fid, 0.99)),
            "final_n_a": num(last(&n_a)),
            "final_parity": num(last(&par)),
            "dt": num(run.dt),
            "steps": traj.n_steps,
        }),
    );
    dir.json("simulate.json", body)
}

struct SteadyModeA {
    rho_a: DensityMatrix,
    kind: CatKind,
    multiplicity: usize,
    residual: f64,
}

fn steady_mode_a(cfg: &RunConfig, ph: &Physics) -> Result<SteadyModeA, CliError> {
    let (tier, dims) = tier_and_dims(cfg)?;
    let hint: String = cfg.get("hint", "even".to_string())?;
    let (hint, kind) = match hint.as_str() {
        "even" => (Some(SteadyStateHint::Even), CatKind::Even),
        "odd" => (Some(SteadyStateHint::Odd), CatKind::Odd),
        "none" => (None, CatKind::Even),
        other => return Err(CliError::Config(format!("unknown hint '{other}' (expected even, odd or none)"))),
    };
    let model = build_model(&ph.system, &ph.derived, tier, &dims)?;
    let ss = steady_state(&model, hint.as_ref())?;
    let rho_a = if tier == Tier::Reduced {
        ss.rho
    } else {
        partial_trace(&ss.rho, &[0])?
    };
    Ok(SteadyModeA {
        rho_a,
        kind,
        multiplicity: ss.multiplicity,
        residual: ss.residual,
    })
}

fn lab_dim(cfg: &RunConfig, alpha: f64, r: f64) -> Result<usize, CliError> {
    cfg.get("dim", required_dim(alpha, r) + 20)
}

fn steady(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&allowed(&["tier", "dims", "hint", "dim", "strict_rwa"]))?;
    let ph = physics(cfg)?;
    let report = rwa_report(&ph);
    check_rwa(cfg, &report)?;
    let s = steady_mode_a(cfg, &ph)?;
    let alpha = ph.derived.alpha_or_err()?;
    let mode = s.rho_a.space().modes()[0];
    let target = cat_state(mode, alpha, s.kind)?;
    let f = fidelity(&s.rho_a, &target)?;
    let n_a = expectation(&number(mode), &s.rho_a)?.re;
    let par = expectation(&parity(mode), &s.rho_a)?.re;
    let dim = lab_dim(cfg, alpha.norm(), ph.derived.r)?;
    let padded = s.rho_a.resize(ModeSpace::new(dim)?)?;
    let q = qfi_of_simulated_state(&padded, ph.derived.r)?;

    let (echo, mut body) = preamble(cfg, Some(&ph));
    let pops: Vec<Vec<f64>> = (0..mode.dim())
        .map(|n| vec![n as f64, s.rho_a.matrix()[[n, n]].re])
        .collect();
    dir.csv("steady_populations.csv", &echo, &["n", "population"], &pops)?;
    body.insert("rwa".into(), rwa_json(&report));
    body.insert(
        "result".into(),
        json!({
            "fidelity": num(f),
            "target": if s.kind == CatKind::Odd { "odd" } else { "even" },
            "n_a": num(n_a),
            "parity": num(par),
            "purity": num(s.rho_a.purity()),
            "multiplicity": s.multiplicity,
            "residual": num(s.residual),
            "lab_qfi": num(q.f),
            "lab_photon_number": num(q.n),
            "lab_mandel_q": num(q.q),
        }),
    );
    dir.json("steady.json", body)
}

fn wigner(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&allowed(&[
        "state", "method", "dim", "points", "q_half", "p_half", "time", "tier", "dims", "hint",
    ]))?;
    let state: String = cfg.get("state", "secs".to_string())?;
    let method: String = cfg.get("method", "numeric".to_string())?;
    if method != "numeric" && method != "analytic" {
        return Err(CliError::Config(format!("unknown method '{method}' (expected numeric or analytic)")));
    }
    if method == "analytic" && state != "secs" {
        return Err(CliError::Config("the analytic Wigner function exists for state = secs only".into()));
    }

    let mut phys = None;
    let (alpha, r) = if state == "steady" {
        let ph = physics(cfg)?;
        let a = ph.derived.alpha_or_err()?.norm();
        let r = ph.derived.r;
        phys = Some(ph);
        (a, r)
    } else {
        (cfg.f64("alpha", 2.0)?, cfg.f64("r", 1.1)?)
    };
    let mut spec = GridSpec::for_cat(C64::new(alpha, 0.0), r);
    spec.points = cfg.get("points", spec.points)?;
    spec.q_half = cfg.f64("q_half", spec.q_half)?;
    spec.p_half = cfg.f64("p_half", spec.p_half)?;

    let grid: WignerGrid = if method == "analytic" {
        wigner_analytic_secs(alpha, r, &spec)?
    } else {
        let dim = lab_dim(cfg, alpha, r)?;
        match state.as_str() {
            "secs" | "socs" | "syscs" => {
                let kind: FamilyKind = state.parse()?;
                let psi = StateFamily::new(kind, alpha, r)?.state(dim)?;
                wigner_numeric(&psi, &spec)?
            }
            "decayed" => {
                let kappa_a = cfg.f64("kappa_a", 1e-3)?;
                let t = cfg.f64("time", 0.0)?;
                let rho = sqcat::model::decayed_cat_density(alpha, r, kappa_a, t, dim)?;
                wigner_numeric(&rho, &spec)?
            }
            "steady" => {
                let ph = phys.as_ref().expect("set above");
                let s = steady_mode_a(cfg, ph)?;
                let padded = s.rho_a.resize(ModeSpace::new(dim)?)?;
                let lab = sqcat::model::to_lab_frame_dm(&padded, r)?;
                wigner_numeric(&lab, &spec)?
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown state '{other}' (expected secs, socs, syscs, decayed or steady)"
                )))
            }
        }
    };

    let (echo, mut body) = preamble(cfg, phys.as_ref());
    let rows = grid.values.rows().into_iter().map(|row| row.to_vec());
    dir.wigner_csv("wigner.csv", &echo, &grid.q_values, &grid.p_values, rows)?;
    body.insert(
        "result".into(),
        json!({
            "normalization": num(grid.normalization()),
            "min": num(grid.min()),
            "max": num(grid.max()),
            "negativity_volume": num(negativity_volume(&grid)),
            "q0": num(grid.q0),
            "p0": num(grid.p0),
            "points": spec.points,
        }),
    );
    dir.json("wigner.json", body)
}

fn family_kind(cfg: &RunConfig) -> Result<FamilyKind, CliError> {
    cfg.get("family", FamilyKind::Secs)
}

fn qfi(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&["family", "alpha", "r", "dim"])?;
    let kind = family_kind(cfg)?;
    let alpha = cfg.f64("alpha", 2.0)?;
    let r = cfg.f64("r", if kind.is_squeezed() { 1.1 } else { 0.0 })?;
    let family = StateFamily::new(kind, alpha, r)?;
    let a = qfi_analytic(&family);
    let numeric = match cfg.parsed::<usize>("dim")? {
        Some(dim) => {
            let n = qfi_numeric(&family, dim)?;
            Some(json!({
                "dim": dim,
                "f": num(n.f),
                "n": num(n.n),
                "relative_error": num((n.f - a.f).abs() / a.f.abs().max(1.0)),
            }))
        }
        None => None,
    };
    let (_, mut body) = preamble(cfg, None);
    body.insert(
        "result".into(),
        json!({
            "family": kind.name(),
            "f": num(a.f),
            "n": num(a.n),
            "q": num(a.q),
            "j_corr": num(a.j_corr),
            "f_over_n": num(if a.n > 0.0 { a.f / a.n } else { f64::NAN }),
            "f_over_n_squared": num(if a.n > 0.0 { a.f / (a.n * a.n) } else { f64::NAN }),
            "numeric": numeric.unwrap_or(Value::Null),
        }),
    );
    dir.json("qfi.json", body)
}

fn optimum_json(o: &Optimum) -> Value {
    json!({
        "family": o.kind.name(),
        "n_target": num(o.n_target),
        "f": num(o.f),
        "n": num(o.n),
        "r": num(o.r),
        "alpha": num(o.alpha),
    })
}

fn optimize(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&["family", "n", "oracle"])?;
    let kind = family_kind(cfg)?;
    let n = cfg.f64("n", 20.0)?;
    let best = optimize_qfi(kind, n)?;
    let oracle = if cfg.bool("oracle", false)? {
        Some(brute_force_qfi(kind, n)?)
    } else {
        None
    };
    let (_, mut body) = preamble(cfg, None);
    body.insert("result".into(), optimum_json(&best));
    body.insert("oracle".into(), oracle.as_ref().map_or(Value::Null, optimum_json));
    dir.json("optimize.json", body)
}

fn fit(cfg: &RunConfig, dir: &mut OutputDir) -> Result<(), CliError> {
    cfg.check_keys(&["family", "n_min", "n_max", "n_step"])?;
    let kind = family_kind(cfg)?;
    let n_min = cfg.f64("n_min", 4.0)?;
    let n_max = cfg.f64("n_max", 100.0)?;
    let n_step = cfg.f64("n_step", 2.0)?;
    if !(n_step > 0.0 && n_max >= n_min) {
        return Err(CliError::Config("need n_step > 0 and n_max >= n_min".into()));
    }
    let count = ((n_max - n_min) / n_step + 1e-9).floor() as usize + 1;
    let samples: Vec<f64> = (0..count).map(|k| n_min + n_step * k as f64).collect();
    let result = fit_scaling(kind, &samples)?;

    let (echo, mut body) = preamble(cfg, None);
    let rows: Vec<Vec<f64>> = result
        .optima
        .iter()
        .map(|o| vec![o.n_target, o.f, o.r, o.alpha, result.predict(o.n_target)])
        .collect();
    dir.csv("fit.csv", &echo, &["n", "f_star", "r", "alpha", "f_fit"], &rows)?;
    let coefficients: Map<String, Value> = result
        .basis
        .iter()
        .zip(&result.coefficients)
        .map(|(t, c)| (t.label().to_string(), num(*c)))
        .collect();
    body.insert(
        "result".into(),
        json!({
            "family": kind.name(),
            "coefficients": coefficients,
            "rms_residual": num(result.residual),
            "samples": samples.len(),
        }),
    );
    dir.json("fit.json", body)
}
