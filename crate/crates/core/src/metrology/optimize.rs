use super::family::{closed_form, FamilyKind};
use crate::{Error, Result};

/// Upper end of the squeeze search interval.
pub const R_MAX: f64 = 3.0;

/// Allowed `|N - N_target|` at the returned optimum.
pub const CONSTRAINT_TOL: f64 = 1e-8;

const ALPHA_SCAN: usize = 512;
const R_SCAN: usize = 301;
const ODD_ALPHA_FLOOR: f64 = 1e-6;

/// Best `(r, alpha)` at a fixed total photon number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    pub kind: FamilyKind,
    pub n_target: f64,
    pub r: f64,
    pub alpha: f64,
    pub f: f64,
    pub n: f64,
}

fn n_of(kind: FamilyKind, r: f64, alpha: f64) -> f64 {
    closed_form(kind, alpha, r).1
}

fn f_of(kind: FamilyKind, r: f64, alpha: f64) -> f64 {
    closed_form(kind, alpha, r).0
}

fn alpha_floor(kind: FamilyKind) -> f64 {
    if kind.allows_zero_alpha() {
        0.0
    } else {
        ODD_ALPHA_FLOOR
    }
}

// For large alpha every family approaches N = 2[sinh^2 r + alpha^2 e^{-2r}].
fn alpha_ceiling(kind: FamilyKind, r: f64, n_target: f64) -> f64 {
    let mut hi = ((0.5 * n_target + 1.0) * (2.0 * r).exp()).sqrt() + 1.0;
    while n_of(kind, r, hi) <= n_target && hi < 1e4 {
        hi *= 2.0;
    }
    hi
}

fn bisect(kind: FamilyKind, r: f64, n_target: f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = |a: f64| n_of(kind, r, a) - n_target;
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    if (g(lo)).abs() <= (g(hi)).abs() {
        lo
    } else {
        hi
    }
}

/// Amplitudes solving `N(r, alpha) = n_target` found on `scan` sub-intervals.
pub(crate) fn alpha_roots(kind: FamilyKind, r: f64, n_target: f64, scan: usize) -> Vec<f64> {
    let lo = alpha_floor(kind);
    let hi = alpha_ceiling(kind, r, n_target);
    // Quadratic spacing resolves the low-amplitude dip of N when the ceiling is large.
    let grid: Vec<f64> = (0..=scan)
        .map(|k| {
            let u = k as f64 / scan as f64;
            lo + (hi - lo) * u * u
        })
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&a| n_of(kind, r, a) - n_target).collect();
    let mut roots = Vec::new();
    for k in 0..scan {
        if vals[k] == 0.0 {
            roots.push(grid[k]);
        } else if (vals[k] < 0.0) != (vals[k + 1] < 0.0) && vals[k + 1] != 0.0 {
            roots.push(bisect(kind, r, n_target, grid[k], grid[k + 1]));
        }
    }
    if vals[scan] == 0.0 {
        roots.push(grid[scan]);
    }
    roots
}

/// Largest QFI on the constraint curve at fixed `r`.
fn best_at(kind: FamilyKind, r: f64, n_target: f64, scan: usize) -> Option<(f64, f64)> {
    let mut roots = alpha_roots(kind, r, n_target, scan);
    // Tight test so the constraint slack cannot push the squeeze past the vacuum edge.
    if kind.allows_zero_alpha() && (n_of(kind, r, 0.0) - n_target).abs() <= 1e-12 * n_target.max(1.0) {
        roots.push(0.0);
    }
    roots
        .into_iter()
        .map(|a| (a, f_of(kind, r, a)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
}

fn score(kind: FamilyKind, r: f64, n_target: f64) -> f64 {
    best_at(kind, r, n_target, ALPHA_SCAN).map_or(f64::NEG_INFINITY, |(_, f)| f)
}

fn golden_max(mut a: f64, mut b: f64, g: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while (b - a).abs() > 1e-13 * (1.0 + a.abs()) {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        c
    } else {
        d
    }
}

fn check_target(kind: FamilyKind, n_target: f64) -> Result<()> {
    if !(n_target.is_finite() && n_target > 0.0) {
        return Err(Error::Infeasible(format!("photon number target must be positive, got {n_target}")));
    }
    if !kind.allows_zero_alpha() && n_target < 2.0 {
        return Err(Error::Infeasible(format!("{kind} carries N >= 2; target {n_target} is unreachable")));
    }
    Ok(())
}

fn finish(kind: FamilyKind, n_target: f64, r: f64, alpha: f64) -> Result<Optimum> {
    let (f, n) = closed_form(kind, alpha, r);
    if (n - n_target).abs() > CONSTRAINT_TOL * n_target.max(1.0) {
        return Err(Error::Numerical(format!(
            "{kind} optimum misses the photon-number constraint: N = {n}, target {n_target}"
        )));
    }
    Ok(Optimum {
        kind,
        n_target,
        r,
        alpha,
        f,
        n,
    })
}

/// Maximizes the QFI over `(r, alpha)` subject to `N(r, alpha) = n_target`.
///
/// At fixed `r` the amplitude comes from bracketed bisection on a scan of the constraint;
/// the squeeze is chosen by a grid scan over `[0, R_MAX]` refined by golden section.
/// Unsqueezed families have `r = 0`.
pub fn optimize_qfi(kind: FamilyKind, n_target: f64) -> Result<Optimum> {
    check_target(kind, n_target)?;
    if !kind.is_squeezed() {
        let (alpha, _) = best_at(kind, 0.0, n_target, ALPHA_SCAN)
            .ok_or_else(|| Error::Infeasible(format!("{kind} cannot reach N = {n_target}")))?;
        return finish(kind, n_target, 0.0, alpha);
    }

    let rs: Vec<f64> = (0..R_SCAN).map(|k| R_MAX * k as f64 / (R_SCAN - 1) as f64).collect();
    let scores: Vec<f64> = rs.iter().map(|&r| score(kind, r, n_target)).collect();
    let (best, &best_score) = scores
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty scan");
    if best_score == f64::NEG_INFINITY {
        return Err(Error::Infeasible(format!("{kind} cannot reach N = {n_target} with r <= {R_MAX}")));
    }

    let lo = rs[best.saturating_sub(1)];
    let hi = rs[(best + 1).min(R_SCAN - 1)];
    let mut candidates = vec![rs[best], golden_max(lo, hi, |r| score(kind, r, n_target))];
    // Pure squeezed vacuum sits on the edge of the feasible region.
    if kind.allows_zero_alpha() {
        let r_edge = (0.5 * n_target).sqrt().asinh();
        if r_edge <= R_MAX {
            candidates.push(r_edge);
        }
    }
    let (r, (alpha, _)) = candidates
        .into_iter()
        .filter_map(|r| best_at(kind, r, n_target, ALPHA_SCAN).map(|b| (r, b)))
        .max_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
        .ok_or_else(|| Error::Infeasible(format!("{kind} cannot reach N = {n_target}")))?;
    finish(kind, n_target, r, alpha)
}

/// Exhaustive reference optimum: a 400 x 400 `(r, alpha)` scan with bisection on every
/// bracketed constraint crossing, followed by repeated 400-point zooms in `r`.
pub fn brute_force_qfi(kind: FamilyKind, n_target: f64) -> Result<Optimum> {
    const GRID: usize = 400;
    check_target(kind, n_target)?;
    let eval = |r: f64| best_at(kind, r, n_target, GRID);
    let pick = |rs: &[f64]| {
        rs.iter()
            .filter_map(|&r| eval(r).map(|(a, f)| (r, a, f)))
            .max_by(|x, y| x.2.total_cmp(&y.2))
    };
    if !kind.is_squeezed() {
        let (r, a, _) = pick(&[0.0]).ok_or_else(|| Error::Infeasible(format!("{kind} cannot reach N = {n_target}")))?;
        return finish(kind, n_target, r, a);
    }
    let mut lo = 0.0;
    let mut hi = R_MAX;
    let mut best = None;
    for _ in 0..6 {
        let rs: Vec<f64> = (0..GRID).map(|k| lo + (hi - lo) * k as f64 / (GRID - 1) as f64).collect();
        let Some(found) = pick(&rs) else { break };
        if best.is_none_or(|b: (f64, f64, f64)| found.2 > b.2) {
            best = Some(found);
        }
        let step = (hi - lo) / (GRID - 1) as f64;
        let centre = best.expect("set above").0;
        lo = (centre - step).max(0.0);
        hi = (centre + step).min(R_MAX);
    }
    let (r, a, _) = best.ok_or_else(|| Error::Infeasible(format!("{kind} cannot reach N = {n_target}")))?;
    finish(kind, n_target, r, a)
}
