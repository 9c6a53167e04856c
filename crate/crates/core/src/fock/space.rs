use std::fmt;

use crate::{Error, Result};

/// A single bosonic mode truncated to Fock levels `0..dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeSpace {
    dim: usize,
}

impl ModeSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "mode truncation must be at least 2, got {dim}"
            )));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl fmt::Display for ModeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fock({})", self.dim)
    }
}

/// Ordered tensor product of truncated modes.
///
/// Basis ordering is lexicographic with mode 0 as the most significant
/// index, matching `kron(op_0, kron(op_1, ...))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompositeSpace {
    modes: Vec<ModeSpace>,
}

impl CompositeSpace {
    pub fn new(modes: Vec<ModeSpace>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter(
                "composite space needs at least one mode".into(),
            ));
        }
        Ok(Self { modes })
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        let modes = dims
            .iter()
            .map(|&d| ModeSpace::new(d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(modes)
    }

    pub fn single(mode: ModeSpace) -> Self {
        Self { modes: vec![mode] }
    }

    pub fn modes(&self) -> &[ModeSpace] {
        &self.modes
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modes.iter().map(ModeSpace::dim).collect()
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn is_single_mode(&self) -> bool {
        self.modes.len() == 1
    }

    pub fn total_dim(&self) -> usize {
        self.modes.iter().map(ModeSpace::dim).product()
    }

    pub fn mode(&self, position: usize) -> Option<ModeSpace> {
        self.modes.get(position).copied()
    }

    pub(crate) fn ensure_same(&self, other: &CompositeSpace) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: other.total_dim(),
            });
        }
        Ok(())
    }
}

impl From<ModeSpace> for CompositeSpace {
    fn from(mode: ModeSpace) -> Self {
        Self::single(mode)
    }
}

impl fmt::Display for CompositeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.modes.iter().map(|m| m.dim.to_string()).collect();
        write!(f, "Fock({})", dims.join("x"))
    }
}

/// Smallest truncation accepted for a state of coherent amplitude `|alpha|`
/// squeezed by `r`: `ceil(4 (|alpha|^2 + 1) e^{2|r|})`.
///
/// Squeezed cats occupy Fock levels up to roughly `|alpha|^2 e^{2r}`.
pub fn required_dim(alpha_abs: f64, r: f64) -> usize {
    let growth = (2.0 * r.abs()).exp();
    // Round-off in derived amplitudes must not bump the requirement by a level.
    (4.0 * (alpha_abs * alpha_abs * growth + growth) * (1.0 - 1e-12)).ceil() as usize
}

pub fn check_truncation(dim: usize, alpha_abs: f64, r: f64) -> Result<()> {
    let required = required_dim(alpha_abs, r);
    if dim < required {
        return Err(Error::Truncation {
            required,
            actual: dim,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_mode() {
        assert!(ModeSpace::new(1).is_err());
        assert!(ModeSpace::new(2).is_ok());
    }

    #[test]
    fn total_dim_is_product() {
        let s = CompositeSpace::from_dims(&[20, 4, 3]).unwrap();
        assert_eq!(s.total_dim(), 240);
        assert_eq!(s.dims(), vec![20, 4, 3]);
    }

    #[test]
    fn guard_for_squeezed_cat() {
        // 4 (4 e^{2.2} + e^{2.2}) = 180.5
        assert_eq!(required_dim(2.0, 1.1), 181);
        assert!(check_truncation(200, 2.0, 1.1).is_ok());
        assert!(matches!(
            check_truncation(100, 2.0, 1.1),
            Err(Error::Truncation { required: 181, actual: 100 })
        ));
    }
}
