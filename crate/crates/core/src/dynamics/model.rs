use num_complex::Complex64 as C64;

use crate::fock::{CompositeSpace, Operator};
use crate::{Error, Result};

const PHYSICALITY_TOL: f64 = 1e-10;

/// Scalar time dependence of a Hamiltonian term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Envelope {
    Constant(C64),
    /// `amplitude * exp(-i frequency t)`.
    Oscillating { amplitude: C64, frequency: f64 },
}

impl Envelope {
    pub fn real(x: f64) -> Self {
        Envelope::Constant(C64::new(x, 0.0))
    }

    pub fn value(&self, t: f64) -> C64 {
        match *self {
            Envelope::Constant(c) => c,
            Envelope::Oscillating { amplitude, frequency } => {
                amplitude * C64::new(0.0, -frequency * t).exp()
            }
        }
    }

    /// Envelope of the Hermitian-conjugate partner.
    pub fn conj(&self) -> Self {
        match *self {
            Envelope::Constant(c) => Envelope::Constant(c.conj()),
            Envelope::Oscillating { amplitude, frequency } => Envelope::Oscillating {
                amplitude: amplitude.conj(),
                frequency: -frequency,
            },
        }
    }

    pub fn frequency(&self) -> f64 {
        match *self {
            Envelope::Constant(_) => 0.0,
            Envelope::Oscillating { frequency, .. } => frequency,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Envelope::Constant(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianTerm {
    pub operator: Operator,
    pub envelope: Envelope,
}

impl HamiltonianTerm {
    pub fn new(operator: Operator, envelope: Envelope) -> Self {
        Self { operator, envelope }
    }

    /// The term together with its Hermitian-conjugate partner.
    pub fn with_hc(operator: Operator, envelope: Envelope) -> [Self; 2] {
        let partner = Self {
            operator: operator.adjoint(),
            envelope: envelope.conj(),
        };
        [Self { operator, envelope }, partner]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DissipatorKind {
    Standard,
    /// Squeezed-vacuum reservoir with occupation `n_env` and correlation `m_env`.
    Squeezed { n_env: f64, m_env: C64 },
}

/// `rate * D[o]` or `rate * [(N+1) D[o] + N D[o^dagger] - M G[o] - M^* G[o^dagger]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dissipator {
    operator: Operator,
    rate: f64,
    kind: DissipatorKind,
}

impl Dissipator {
    pub fn standard(operator: Operator, rate: f64) -> Result<Self> {
        check_rate(rate)?;
        Ok(Self {
            operator,
            rate,
            kind: DissipatorKind::Standard,
        })
    }

    pub fn squeezed(operator: Operator, rate: f64, n_env: f64, m_env: C64) -> Result<Self> {
        check_rate(rate)?;
        if !(n_env >= 0.0) || !m_env.norm().is_finite() {
            return Err(Error::InvalidParameter(format!(
                "reservoir occupation must be non-negative, got {n_env}"
            )));
        }
        if m_env.norm_sqr() > n_env * (n_env + 1.0) + PHYSICALITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "unphysical reservoir: |M|^2 = {:.6e} exceeds N(N+1) = {:.6e}",
                m_env.norm_sqr(),
                n_env * (n_env + 1.0)
            )));
        }
        Ok(Self {
            operator,
            rate,
            kind: DissipatorKind::Squeezed { n_env, m_env },
        })
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn kind(&self) -> DissipatorKind {
        self.kind
    }

    /// Gershgorin bound on the dissipative part of the generator.
    pub fn norm_bound(&self) -> f64 {
        let o = &self.operator;
        let od = o.adjoint();
        let base = (&od * o).norm_bound();
        match self.kind {
            DissipatorKind::Standard => self.rate * base,
            DissipatorKind::Squeezed { n_env, m_env } => {
                let o2 = (o * o).norm_bound();
                let od2 = (&od * &od).norm_bound();
                self.rate
                    * ((n_env + 1.0) * base
                        + n_env * (o * &od).norm_bound()
                        + m_env.norm() * (o2 + od2))
            }
        }
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!("decay rate must be non-negative, got {rate}")));
    }
    Ok(())
}

/// Hamiltonian terms plus dissipators on one composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    space: CompositeSpace,
    terms: Vec<HamiltonianTerm>,
    dissipators: Vec<Dissipator>,
}

impl LindbladModel {
    pub fn new(space: CompositeSpace) -> Self {
        Self {
            space,
            terms: Vec::new(),
            dissipators: Vec::new(),
        }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn dissipators(&self) -> &[Dissipator] {
        &self.dissipators
    }

    pub fn add_term(&mut self, term: HamiltonianTerm) -> Result<()> {
        self.space.ensure_same(term.operator.space())?;
        self.terms.push(term);
        Ok(())
    }

    /// Adds `envelope * op` and its Hermitian conjugate.
    pub fn add_with_hc(&mut self, op: Operator, envelope: Envelope) -> Result<()> {
        for t in HamiltonianTerm::with_hc(op, envelope) {
            self.add_term(t)?;
        }
        Ok(())
    }

    pub fn add_dissipator(&mut self, d: Dissipator) -> Result<()> {
        self.space.ensure_same(d.operator.space())?;
        self.dissipators.push(d);
        Ok(())
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.iter().all(|t| t.envelope.is_constant())
    }

    pub fn hamiltonian(&self, t: f64) -> Operator {
        self.terms.iter().fold(Operator::zeros(self.space.clone()), |acc, term| {
            &acc + &term.operator.scale(term.envelope.value(t))
        })
    }

    /// Largest `|H(t) - H(t)^dagger|` over the given sample times.
    pub fn hermiticity_error(&self, times: &[f64]) -> f64 {
        times
            .iter()
            .map(|&t| self.hamiltonian(t).hermiticity_error())
            .fold(0.0, f64::max)
    }

    /// Upper estimate of the fastest rate in the generator.
    pub fn omega_max(&self) -> f64 {
        let env = self
            .terms
            .iter()
            .map(|t| t.envelope.frequency().abs())
            .fold(0.0, f64::max);
        let h0 = self.hamiltonian(0.0).norm_bound();
        let diss: f64 = self.dissipators.iter().map(Dissipator::norm_bound).sum();
        env + h0 + diss
    }

    /// Step-size bound `(2 pi / omega_max) / 20`.
    pub fn max_dt(&self) -> f64 {
        let w = self.omega_max();
        if w > 0.0 {
            std::f64::consts::TAU / w / 20.0
        } else {
            f64::INFINITY
        }
    }
}
