use serde::{Deserialize, Serialize};

use crate::error::{BasError, Result};

/// Additive constant of the step-size recursion unless overridden.
pub const DEFAULT_STEP_FLOOR: f64 = 0.001;

/// Scalar hyperparameters of a search.
///
/// The step size follows `delta' = alpha * delta + step_floor` and the
/// antenna length follows `d' = c * d + d0`, so they settle at
/// `step_floor / (1 - alpha)` and `d0 / (1 - c)` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasParams {
    pub alpha: f64,
    pub c: f64,
    pub delta0: f64,
    pub d_init: f64,
    pub d0: f64,
    pub step_floor: f64,
    pub k_max: u64,
    pub seed: u64,
}

impl Default for BasParams {
    fn default() -> Self {
        Self {
            alpha: 0.95,
            c: 0.95,
            delta0: 10.0,
            d_init: 10.0,
            d0: 0.001,
            step_floor: DEFAULT_STEP_FLOOR,
            k_max: 10_000,
            seed: 0,
        }
    }
}

impl BasParams {
    pub fn validate(&self) -> Result<()> {
        fn bad(name: &'static str, reason: String) -> Result<()> {
            Err(BasError::InvalidParam { name, reason })
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha", format!("must lie in (0, 1), got {}", self.alpha));
        }
        for (name, v) in [
            ("c", self.c),
            ("delta0", self.delta0),
            ("d_init", self.d_init),
            ("d0", self.d0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(name, format!("must be positive and finite, got {v}"));
            }
        }
        if !(self.step_floor >= 0.0 && self.step_floor.is_finite()) {
            return bad(
                "step_floor",
                format!("must be non-negative and finite, got {}", self.step_floor),
            );
        }
        Ok(())
    }

    /// Limit of the step-size recursion.
    pub fn step_limit(&self) -> f64 {
        self.step_floor / (1.0 - self.alpha)
    }

    /// Limit of the antenna recursion; infinite when `c >= 1`.
    pub fn antenna_limit(&self) -> f64 {
        if self.c < 1.0 {
            self.d0 / (1.0 - self.c)
        } else {
            f64::INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        BasParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_each_invariant() {
        let base = BasParams::default();
        let cases = [
            BasParams { alpha: 1.0, ..base },
            BasParams { alpha: 0.0, ..base },
            BasParams { c: 0.0, ..base },
            BasParams {
                delta0: -1.0,
                ..base
            },
            BasParams {
                d_init: 0.0,
                ..base
            },
            BasParams { d0: 0.0, ..base },
            BasParams {
                step_floor: -1e-3,
                ..base
            },
            BasParams {
                alpha: f64::NAN,
                ..base
            },
        ];
        for p in cases {
            assert!(p.validate().is_err(), "{p:?} should be rejected");
        }
        assert!(BasParams {
            step_floor: 0.0,
            ..base
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn limits() {
        let p = BasParams {
            alpha: 0.95,
            c: 0.94,
            d0: 0.001,
            step_floor: 0.001,
            ..Default::default()
        };
        assert!((p.step_limit() - 0.02).abs() < 1e-15);
        assert!((p.antenna_limit() - 0.001 / 0.06).abs() < 1e-15);
    }
}
