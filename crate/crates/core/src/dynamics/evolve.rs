use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::generator::Generator;
use super::model::LindbladModel;
use crate::fock::{expectation, fidelity, partial_trace, DensityMatrix, Operator, PureState};
use crate::{Error, Result};

/// Trace deviation tolerated at snapshots.
pub const CHECKPOINT_TRACE_TOL: f64 = 1e-6;

/// Quantity recorded along a trajectory.
#[derive(Clone, Debug)]
pub enum Observable {
    Expectation(Operator),
    Fidelity(PureState),
    /// Fidelity of the reduced state on `keep` against `target`.
    ReducedFidelity { keep: Vec<usize>, target: PureState },
    Purity,
    Trace,
}

impl Observable {
    fn evaluate(&self, rho: &DensityMatrix) -> Result<C64> {
        Ok(match self {
            Observable::Expectation(op) => expectation(op, rho)?,
            Observable::Fidelity(psi) => C64::new(fidelity(rho, psi)?, 0.0),
            Observable::ReducedFidelity { keep, target } => {
                C64::new(fidelity(&partial_trace(rho, keep)?, target)?, 0.0)
            }
            Observable::Purity => C64::new(rho.purity(), 0.0),
            Observable::Trace => rho.trace(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub t_final: f64,
    pub dt: f64,
    /// Times at which observables are recorded; snapped to the step grid.
    pub sample_times: Vec<f64>,
    pub snapshot_times: Vec<f64>,
}

impl EvolveOptions {
    /// `n_samples` evenly spaced records from 0 to `t_final`.
    pub fn uniform(t_final: f64, dt: f64, n_samples: usize) -> Self {
        let m = n_samples.max(2) - 1;
        Self {
            t_final,
            dt,
            sample_times: (0..=m).map(|k| t_final * k as f64 / m as f64).collect(),
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    /// One series per observable, aligned with `times`.
    pub series: Vec<Vec<C64>>,
    pub snapshots: Vec<(f64, DensityMatrix)>,
    pub final_state: DensityMatrix,
    /// Effective step actually used, `t_final / n_steps`.
    pub dt: f64,
    pub n_steps: usize,
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<&[C64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| self.series[k].as_slice())
    }

    pub fn real_series(&self, name: &str) -> Option<Vec<f64>> {
        self.series(name).map(|s| s.iter().map(|z| z.re).collect())
    }
}

fn snap(times: &[f64], dt: f64, n_steps: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = times
        .iter()
        .map(|&t| ((t / dt).round().max(0.0) as usize).min(n_steps))
        .collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// Fixed-step RK4 integration of the master equation.
///
/// Refuses to run when `dt` exceeds [`LindbladModel::max_dt`].
pub fn evolve(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    observables: &[(String, Observable)],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    model.space().ensure_same(rho0.space())?;
    if !(opts.t_final > 0.0) || !opts.t_final.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "final time must be positive, got {}",
            opts.t_final
        )));
    }
    let required = model.max_dt();
    if !(opts.dt > 0.0) || opts.dt > required {
        return Err(Error::StepSize {
            required,
            given: opts.dt,
        });
    }
    let n_steps = (opts.t_final / opts.dt).ceil() as usize;
    let dt = opts.t_final / n_steps as f64;
    let samples = snap(&opts.sample_times, dt, n_steps);
    let snapshots = snap(&opts.snapshot_times, dt, n_steps);

    let g = Generator::new(model);
    let n = g.dim();
    let nn = n * n;
    let space = model.space().clone();
    let mut rho: Vec<C64> = rho0.matrix().as_standard_layout().iter().cloned().collect();
    let mut k1 = vec![C64::default(); nn];
    let mut k2 = vec![C64::default(); nn];
    let mut k3 = vec![C64::default(); nn];
    let mut k4 = vec![C64::default(); nn];
    let mut stage = vec![C64::default(); nn];
    let mut scratch = vec![C64::default(); 2 * nn];

    let mut traj = Trajectory {
        times: Vec::with_capacity(samples.len()),
        names: observables.iter().map(|(n, _)| n.clone()).collect(),
        series: vec![Vec::with_capacity(samples.len()); observables.len()],
        snapshots: Vec::with_capacity(snapshots.len()),
        final_state: rho0.clone(),
        dt,
        n_steps,
    };
    let (mut si, mut pi) = (0usize, 0usize);
    let time_independent = model.is_time_independent();
    let k_fixed = g.k_at(0.0);

    let as_dm = |rho: &[C64]| {
        DensityMatrix::from_raw(
            space.clone(),
            Array2::from_shape_vec((n, n), rho.to_vec()).expect("square"),
        )
    };

    for step in 0..=n_steps {
        let t = step as f64 * dt;
        let want_sample = si < samples.len() && samples[si] == step;
        let want_snap = pi < snapshots.len() && snapshots[pi] == step;
        if want_sample || want_snap {
            let dm = as_dm(&rho)?;
            if want_sample {
                traj.times.push(t);
                for (k, (_, obs)) in observables.iter().enumerate() {
                    traj.series[k].push(obs.evaluate(&dm)?);
                }
                si += 1;
            }
            if want_snap {
                let tr = dm.trace();
                if (tr - 1.0).norm() > CHECKPOINT_TRACE_TOL {
                    return Err(Error::Numerical(format!(
                        "trace drifted to {:.10} at t = {t}",
                        tr.re
                    )));
                }
                traj.snapshots.push((t, dm));
                pi += 1;
            }
        }
        if step == n_steps {
            break;
        }

        let apply = |tt: f64, x: &[C64], out: &mut [C64], scratch: &mut [C64]| {
            if time_independent {
                g.apply_with(&k_fixed, x, out, scratch);
            } else {
                g.apply(tt, x, out, scratch);
            }
        };
        apply(t, &rho, &mut k1, &mut scratch);
        axpy_into(&rho, 0.5 * dt, &k1, &mut stage);
        apply(t + 0.5 * dt, &stage, &mut k2, &mut scratch);
        axpy_into(&rho, 0.5 * dt, &k2, &mut stage);
        apply(t + 0.5 * dt, &stage, &mut k3, &mut scratch);
        axpy_into(&rho, dt, &k3, &mut stage);
        apply(t + dt, &stage, &mut k4, &mut scratch);
        let w = dt / 6.0;
        for i in 0..nn {
            rho[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if !rho[0].re.is_finite() {
            return Err(Error::Numerical(format!("integration diverged at t = {t}")));
        }
    }
    traj.final_state = as_dm(&rho)?;
    Ok(traj)
}

fn axpy_into(x: &[C64], a: f64, y: &[C64], out: &mut [C64]) {
    for ((o, &xi), &yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

/// Largest relative change in the final sample of every observable when the
/// step is halved.
pub fn dt_convergence(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    observables: &[(String, Observable)],
    opts: &EvolveOptions,
) -> Result<f64> {
    let coarse = evolve(model, rho0, observables, opts)?;
    let fine_opts = EvolveOptions {
        dt: coarse.dt / 2.0,
        ..opts.clone()
    };
    let fine = evolve(model, rho0, observables, &fine_opts)?;
    let mut worst: f64 = 0.0;
    for (a, b) in coarse.series.iter().zip(&fine.series) {
        if let (Some(x), Some(y)) = (a.last(), b.last()) {
            let scale = y.norm().max(1e-12);
            worst = worst.max((x - y).norm() / scale);
        }
    }
    Ok(worst)
}
