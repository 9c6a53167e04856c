use std::fmt;
use std::str::FromStr;

use crate::fock::{expectation, number, squeezed_cat, variance, CatKind, DensityMatrix, ModeSpace, StateRef};
use crate::model::to_lab_frame_dm;
use crate::{Error, Result};

/// The six input-state families of the interferometer analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Ecs,
    Ocs,
    Yscs,
    Secs,
    Socs,
    Syscs,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::Ecs,
        FamilyKind::Ocs,
        FamilyKind::Yscs,
        FamilyKind::Secs,
        FamilyKind::Socs,
        FamilyKind::Syscs,
    ];

    pub fn is_squeezed(self) -> bool {
        matches!(self, FamilyKind::Secs | FamilyKind::Socs | FamilyKind::Syscs)
    }

    pub fn cat_kind(self) -> CatKind {
        match self {
            FamilyKind::Ecs | FamilyKind::Secs => CatKind::Even,
            FamilyKind::Ocs | FamilyKind::Socs => CatKind::Odd,
            FamilyKind::Yscs | FamilyKind::Syscs => CatKind::YurkeStoler,
        }
    }

    /// Whether `alpha = 0` is a valid member.
    pub fn allows_zero_alpha(self) -> bool {
        self.cat_kind() != CatKind::Odd
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Ecs => "ECS",
            FamilyKind::Ocs => "OCS",
            FamilyKind::Yscs => "YSCS",
            FamilyKind::Secs => "SECS",
            FamilyKind::Socs => "SOCS",
            FamilyKind::Syscs => "SYSCS",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown state family '{s}'")))
    }
}

/// A family member with real amplitude `alpha` and squeeze `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateFamily {
    kind: FamilyKind,
    alpha: f64,
    r: f64,
}

impl StateFamily {
    pub fn new(kind: FamilyKind, alpha: f64, r: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!("r must be finite and >= 0, got {r}")));
        }
        if !kind.is_squeezed() && r != 0.0 {
            return Err(Error::InvalidParameter(format!("{kind} is unsqueezed; r must be 0")));
        }
        if !kind.allows_zero_alpha() && alpha == 0.0 {
            return Err(Error::UndefinedState(format!("{kind} requires alpha > 0")));
        }
        Ok(Self { kind, alpha, r })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Single-arm lab-frame state `S(r)^dagger |cat(alpha)>`.
    pub fn state(&self, dim: usize) -> Result<crate::fock::PureState> {
        squeezed_cat(
            ModeSpace::new(dim)?,
            crate::C64::new(self.alpha, 0.0),
            self.r,
            self.kind.cat_kind(),
        )
    }
}

/// Phase-estimation figures for a two-arm separable input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiResult {
    /// `None` for states that do not come from a closed-form family.
    pub family: Option<StateFamily>,
    pub f: f64,
    /// Total mean photon number of both arms.
    pub n: f64,
    pub q: f64,
    pub j_corr: f64,
}

impl QfiResult {
    /// Builds the result from single-arm `<n>` and `Var(n)`; `Q = 0` when `<n> = 0`.
    pub fn from_moments(family: Option<StateFamily>, mean: f64, var: f64) -> Self {
        let q = if mean > 0.0 { (var - mean) / mean } else { 0.0 };
        Self {
            family,
            f: 2.0 * var,
            n: 2.0 * mean,
            q,
            j_corr: 0.0,
        }
    }

    fn from_closed_form(family: StateFamily, f: f64, n: f64) -> Self {
        Self {
            family: Some(family),
            f,
            n,
            q: if n > 0.0 { f / n - 1.0 } else { 0.0 },
            j_corr: 0.0,
        }
    }

    /// `|F - N (1 + Q)(1 - J)| / max(1, F)`.
    pub fn decomposition_error(&self) -> f64 {
        (self.f - self.n * (1.0 + self.q) * (1.0 - self.j_corr)).abs() / self.f.abs().max(1.0)
    }
}

// sinh(y) / cosh(x) without overflow for large x.
pub(crate) fn sinh_over_cosh(y: f64, x: f64) -> f64 {
    ((y - x).exp() - (-y - x).exp()) / (1.0 + (-2.0 * x).exp())
}

pub(crate) fn cosh_over_cosh(y: f64, x: f64) -> f64 {
    ((y - x).exp() + (-y - x).exp()) / (1.0 + (-2.0 * x).exp())
}

pub(crate) fn cosh_over_sinh(y: f64, x: f64) -> f64 {
    ((y - x).exp() + (-y - x).exp()) / -(-2.0 * x).exp_m1()
}

// x / sinh(x), finite at 0.
fn x_csch(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        2.0 * x * (-x).exp() / -(-2.0 * x).exp_m1()
    }
}

/// `(F, N)` from the closed forms; `x = alpha^2`. Odd families need `alpha > 0`.
pub(crate) fn closed_form(kind: FamilyKind, alpha: f64, r: f64) -> (f64, f64) {
    let x = alpha * alpha;
    let sq = (2.0 * r).sinh().powi(2);
    let sh = r.sinh().powi(2);
    match kind.cat_kind() {
        CatKind::Even => {
            let c = cosh_over_cosh(2.0 * r, x);
            let f = sq - 2.0 * x * sinh_over_cosh(4.0 * r - x, x) + 2.0 * x * x * c * c;
            let n = 2.0 * (sh - x * sinh_over_cosh(2.0 * r - x, x));
            (f, n)
        }
        CatKind::Odd => {
            let c = x_csch(x) * (2.0 * r).cosh();
            let f = sq + 2.0 * x * cosh_over_sinh(4.0 * r - x, x) - 2.0 * c * c;
            let n = 2.0 * (sh + x * cosh_over_sinh(2.0 * r - x, x));
            (f, n)
        }
        CatKind::YurkeStoler => {
            let f = sq + 2.0 * (-4.0 * r).exp() * x;
            let n = 2.0 * (sh + x * (-2.0 * r).exp());
            (f, n)
        }
    }
}

/// Closed-form QFI and total photon number of a two-arm separable input.
pub fn qfi_analytic(family: &StateFamily) -> QfiResult {
    let (f, n) = closed_form(family.kind, family.alpha, family.r);
    QfiResult::from_closed_form(*family, f, n)
}

/// QFI from the photon-number variance of the truncated Fock-space state.
pub fn qfi_numeric(family: &StateFamily, dim: usize) -> Result<QfiResult> {
    let psi = family.state(dim)?;
    let mut result = qfi_of_state(&psi)?;
    result.family = Some(*family);
    Ok(result)
}

/// `F = 2 Var(n)` and `N = 2 <n>` for one arm's state copied into both arms.
///
/// For mixed inputs this is the photon-number variance figure, which equals the QFI
/// only for pure states.
pub fn qfi_of_state<'a>(state: impl Into<StateRef<'a>>) -> Result<QfiResult> {
    let state = state.into();
    let space = state.space();
    if !space.is_single_mode() {
        return Err(Error::InvalidParameter("QFI is evaluated on a single arm mode".into()));
    }
    let n_op = number(space.modes()[0]);
    let mean = expectation(&n_op, state)?.re;
    let var = variance(&n_op, state)?;
    Ok(QfiResult::from_moments(None, mean, var))
}

/// Mandel parameter `(Var(n) - <n>) / <n>` of a single-mode state.
pub fn mandel_q<'a>(state: impl Into<StateRef<'a>>) -> Result<f64> {
    Ok(qfi_of_state(state)?.q)
}

/// QFI of a simulated frame state of mode a after mapping it to the lab frame.
pub fn qfi_of_simulated_state(rho_a: &DensityMatrix, r: f64) -> Result<QfiResult> {
    let lab = to_lab_frame_dm(rho_a, r)?;
    qfi_of_state(&lab)
}
