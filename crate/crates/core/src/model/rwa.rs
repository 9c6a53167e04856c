use super::params::{DerivedParams, SystemParams};

/// Ratios at or above this value count as satisfying a strong inequality.
pub const RWA_THRESHOLD: f64 = 10.0;

/// Dominant excitation numbers of modes a, b and c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Occupations {
    pub n_a: f64,
    pub n_b: f64,
    pub n_c: f64,
}

impl Occupations {
    /// `n_a = |alpha|^2`, `n_b = max(1, (2 Omega_2 / kappa_b)^2)`, `n_c = 1`.
    pub fn defaults(d: &DerivedParams) -> Self {
        let n_a = d.alpha.map_or(0.0, |a| a.norm_sqr());
        let n_b = (2.0 * d.omega_2 / d.kappa_b).powi(2).max(1.0);
        Self { n_a, n_b, n_c: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RwaEntry {
    pub label: &'static str,
    pub large: f64,
    pub small: f64,
    /// `large / small`; infinite when the small side vanishes.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RwaReport {
    pub occupations: Occupations,
    pub entries: Vec<RwaEntry>,
    pub threshold: f64,
}

impl RwaReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.ratio >= self.threshold)
    }

    pub fn min_ratio(&self) -> f64 {
        self.entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min)
    }
}

fn entry(label: &'static str, large: f64, small: f64) -> RwaEntry {
    let ratio = if small == 0.0 { f64::INFINITY } else { large / small };
    RwaEntry { label, large, small, ratio }
}

/// Checks that every non-resonant term rotates much faster than its coupling.
pub fn rwa_validity(p: &SystemParams, d: &DerivedParams, occ: Occupations) -> RwaReport {
    let Occupations { n_a, n_b, n_c } = occ;
    let eta = d.eta_s.norm();
    let sh2 = d.r.sinh().powi(2);
    let two_db = 2.0 * p.delta_b.abs();
    let dbc = (p.delta_b - p.delta_c).abs();
    let sbc = (n_b * n_c).sqrt();
    let mixed = d.g_p * n_a * sbc / 2.0;
    let entries = vec![
        entry("2|delta_b| vs g_p eta_s n_a sqrt(n_b)/2", two_db, d.g_p * eta * n_a * n_b.sqrt() / 2.0),
        entry("2|delta_b| vs 2 g_s eta_s n_a sqrt(n_b)", two_db, 2.0 * d.g_s * eta * n_a * n_b.sqrt()),
        entry("2|delta_b| vs 2 g eta_s sinh^2 r sqrt(n_b)", two_db, 2.0 * p.g * eta * sh2 * n_b.sqrt()),
        entry("|delta_b - delta_c| vs g_s n_a sqrt(n_b n_c)", dbc, d.g_s * n_a * sbc),
        entry("|delta_b - delta_c| vs g sinh^2 r sqrt(n_b n_c)", dbc, p.g * sh2 * sbc),
        entry(
            "|delta_b - delta_c + 2 omega_sa| vs g_p n_a sqrt(n_b n_c)/2",
            (p.delta_b - p.delta_c + 2.0 * d.omega_sa).abs(),
            mixed,
        ),
        entry(
            "|delta_b - delta_c - 2 omega_sa| vs g_p n_a sqrt(n_b n_c)/2",
            (p.delta_b - p.delta_c - 2.0 * d.omega_sa).abs(),
            mixed,
        ),
    ];
    RwaReport {
        occupations: occ,
        entries,
        threshold: RWA_THRESHOLD,
    }
}
