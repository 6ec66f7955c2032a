//! Axis-aligned search boxes and the projection onto them.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, BasError, Result};

/// An axis-aligned box `lower <= x <= upper`. Infinite bounds are allowed,
/// so the whole of `R^n` is a valid space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(BasError::InvalidSpace(
                "dimension must be at least 1".into(),
            ));
        }
        check_dim(lower.len(), upper.len())?;
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(BasError::InvalidSpace(format!(
                    "bound {i} is not an interval: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lower, upper]` on every axis.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    /// `R^n`: projection is the identity.
    pub fn unbounded(dim: usize) -> Result<Self> {
        Self::uniform(dim, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.iter().chain(&self.upper).all(|v| v.is_finite())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Componentwise clamp into the box.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut out = x.to_vec();
        self.project_in_place(&mut out);
        Ok(out)
    }

    pub(crate) fn project_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(lo, hi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_boxes() {
        assert!(SearchSpace::new(vec![], vec![]).is_err());
        assert!(SearchSpace::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(SearchSpace::new(vec![1.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![2.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn interior_point_is_unchanged() {
        let space = SearchSpace::uniform(2, -10.0, 10.0).unwrap();
        assert_eq!(space.project(&[5.0, -3.0]).unwrap(), vec![5.0, -3.0]);
    }

    #[test]
    fn exterior_point_is_clamped() {
        let space = SearchSpace::uniform(2, -10.0, 10.0).unwrap();
        assert_eq!(space.project(&[15.0, -12.0]).unwrap(), vec![10.0, -10.0]);
    }

    #[test]
    fn unbounded_projection_is_identity() {
        let space = SearchSpace::unbounded(3).unwrap();
        let x = [1e300, -7.5, 0.0];
        assert_eq!(space.project(&x).unwrap(), x.to_vec());
        assert!(!space.is_bounded());
    }

    #[test]
    fn projection_checks_dimension() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        assert!(matches!(
            space.project(&[0.0]),
            Err(BasError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }
}
