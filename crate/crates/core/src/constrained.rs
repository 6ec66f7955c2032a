//! Penalty-method handling of inequality constraints and the three
//! engineering design problems (spring, speed reducer, three-bar truss).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, BasError, Result};
use crate::objective::Objective;
use crate::params::{BasParams, DEFAULT_STEP_FLOOR};
use crate::space::SearchSpace;

/// A scalar function of the design vector.
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Minimize `objective(x)` subject to `g_i(x) <= 0` for every constraint
/// and `x` inside `space`. `rho` weights the hinge penalties.
#[derive(Clone)]
pub struct ConstrainedProblem {
    name: String,
    objective: ScalarFn,
    constraints: Vec<ScalarFn>,
    space: SearchSpace,
    rho: f64,
}

impl fmt::Debug for ConstrainedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstrainedProblem")
            .field("name", &self.name)
            .field("constraints", &self.constraints.len())
            .field("space", &self.space)
            .field("rho", &self.rho)
            .finish()
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(BasError::InvalidParam {
            name: "rho",
            reason: format!("must be positive and finite, got {rho}"),
        })
    }
}

impl ConstrainedProblem {
    pub fn new(
        name: impl Into<String>,
        space: SearchSpace,
        objective: ScalarFn,
        constraints: Vec<ScalarFn>,
        rho: f64,
    ) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self {
            name: name.into(),
            objective,
            constraints,
            space,
            rho,
        })
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        self.rho = rho;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// The unpenalized objective.
    pub fn objective_value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok((self.objective)(x))
    }

    pub fn constraint_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self.constraints.iter().map(|g| g(x)).collect())
    }

    fn penalty(&self, x: &[f64]) -> f64 {
        self.constraints.iter().map(|g| g(x).max(0.0)).sum()
    }
}

/// `F(x) = f(x) + rho * sum_i max(0, g_i(x))`.
#[derive(Debug, Clone, Copy)]
pub struct Penalized<'a> {
    problem: &'a ConstrainedProblem,
}

impl Objective for Penalized<'_> {
    fn dimension(&self) -> usize {
        self.problem.dim()
    }

    /// Outside the variable box the design formulas are meaningless (the
    /// truss terms change sign for negative areas), so a point there is
    /// scored at its projection. Antenna tips can leave the box.
    fn eval(&self, x: &[f64]) -> f64 {
        let p = self.problem;
        let clamped;
        let x = if p.space.contains(x) {
            x
        } else {
            clamped = p.space.project(x).expect("dimension checked by caller");
            &clamped[..]
        };
        let f = (p.objective)(x);
        let penalty = p.penalty(x);
        // Keeps F == f bit for bit on the feasible set.
        if penalty == 0.0 {
            f
        } else {
            f + p.rho * penalty
        }
    }
}

pub fn penalized_objective(problem: &ConstrainedProblem) -> Penalized<'_> {
    Penalized { problem }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub constraint_values: Vec<f64>,
    /// `max_i max(0, g_i(x))`.
    pub max_violation: f64,
    pub in_bounds: bool,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.max_violation == 0.0 && self.in_bounds
    }
}

pub fn feasibility(problem: &ConstrainedProblem, x: &[f64]) -> Result<FeasibilityReport> {
    let constraint_values = problem.constraint_values(x)?;
    let max_violation = constraint_values.iter().fold(0.0_f64, |m, &g| m.max(g));
    Ok(FeasibilityReport {
        constraint_values,
        max_violation,
        in_bounds: problem.space.contains(x),
    })
}

/// Closed lower bound standing in for the open `0 < x` of the truss problem.
pub const TRUSS_LOWER: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineeringId {
    Spring,
    SpeedReducer,
    ThreeBarTruss,
}

impl EngineeringId {
    pub const ALL: [EngineeringId; 3] = [
        EngineeringId::Spring,
        EngineeringId::SpeedReducer,
        EngineeringId::ThreeBarTruss,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EngineeringId::Spring => "spring",
            EngineeringId::SpeedReducer => "speed_reducer",
            EngineeringId::ThreeBarTruss => "three_bar_truss",
        }
    }

    pub fn default_rho(self) -> f64 {
        match self {
            EngineeringId::Spring => 1e5,
            EngineeringId::SpeedReducer => 1e6,
            // A few times the multiplier of the active stress constraint
            // (about 132). Much larger weights pin the centroid an antenna
            // length inside the feasible region.
            EngineeringId::ThreeBarTruss => 300.0,
        }
    }

    /// `delta0 = 10` and `d_init` = largest upper bound for all three.
    pub fn default_params(self) -> BasParams {
        let (d0, k_max) = match self {
            EngineeringId::Spring => (0.01, 1_000),
            EngineeringId::SpeedReducer => (0.001, 10_000),
            EngineeringId::ThreeBarTruss => (0.01, 10_000),
        };
        let problem = engineering_problem(self);
        let d_init = problem
            .space()
            .upper()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        BasParams {
            alpha: 0.8,
            c: 0.8,
            delta0: 10.0,
            d_init,
            d0,
            step_floor: DEFAULT_STEP_FLOOR,
            k_max,
            seed: 0,
        }
    }
}

impl fmt::Display for EngineeringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EngineeringId {
    type Err = BasError;

    fn from_str(s: &str) -> Result<Self> {
        EngineeringId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| BasError::UnknownProblem(s.to_string()))
    }
}

fn boxed(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// Builds the problem with its default penalty weight.
pub fn engineering_problem(id: EngineeringId) -> ConstrainedProblem {
    let (space, objective, constraints) = match id {
        EngineeringId::Spring => spring(),
        EngineeringId::SpeedReducer => speed_reducer(),
        EngineeringId::ThreeBarTruss => three_bar_truss(),
    };
    ConstrainedProblem::new(id.as_str(), space, objective, constraints, id.default_rho())
        .expect("default penalty weights are positive")
}

type Parts = (SearchSpace, ScalarFn, Vec<ScalarFn>);

/// Variables `(W, D, L)`: wire diameter, mean coil diameter, coil count.
fn spring() -> Parts {
    let space = SearchSpace::new(vec![0.05, 0.25, 2.0], vec![2.0, 1.3, 15.0]).unwrap();
    let objective = boxed(|x| {
        let [w, d, l] = [x[0], x[1], x[2]];
        (l + 2.0) * w * w * d
    });
    let constraints = vec![
        boxed(|x| {
            let [w, d, l] = [x[0], x[1], x[2]];
            1.0 - d.powi(3) * l / (71785.0 * w.powi(4))
        }),
        boxed(|x| {
            let [w, d, l] = [x[0], x[1], x[2]];
            1.0 - 140.45 * w / (d * d * l)
        }),
        boxed(|x| 2.0 * (x[0] + x[1]) / 3.0 - 1.0),
        boxed(|x| {
            let [w, d] = [x[0], x[1]];
            d * (4.0 * d - w) / (w.powi(3) * (12566.0 * d - w)) + 1.0 / (5108.0 * w * w) - 1.0
        }),
    ];
    (space, objective, constraints)
}

/// Variables `(B, H, Z, L1, L2, D1, D2)`. `Z` is treated as continuous.
#[allow(clippy::approx_constant)]
fn speed_reducer() -> Parts {
    let space = SearchSpace::new(
        vec![2.6, 0.7, 17.0, 7.3, 7.8, 2.9, 5.0],
        vec![3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5],
    )
    .unwrap();
    let objective = boxed(|x| {
        let [b, h, z, l1, l2, d1, d2] = [x[0], x[1], x[2], x[3], x[4], x[5], x[6]];
        0.7854 * b * h * h * (3.3333 * z * z + 14.9334 * z - 43.0934)
            - 1.508 * b * (d1 * d1 + d2 * d2)
            + 7.4777 * (d1.powi(3) + d2.powi(3))
            + 0.7854 * (l1 * d1 * d1 + l2 * d2 * d2)
    });
    let constraints = vec![
        boxed(|x| 27.0 / (x[0] * x[1] * x[1] * x[2]) - 1.0),
        boxed(|x| 397.5 / (x[0] * x[1] * x[1] * x[2] * x[2]) - 1.0),
        boxed(|x| 1.93 * x[3].powi(3) / (x[1] * x[2] * x[5].powi(4)) - 1.0),
        boxed(|x| 1.93 * x[4].powi(3) / (x[1] * x[2] * x[6].powi(4)) - 1.0),
        boxed(|x| {
            let load = 745.0 * x[3] / (x[1] * x[2]);
            (load * load + 16.9e6).sqrt() / (110.0 * x[5].powi(3)) - 1.0
        }),
        boxed(|x| {
            let load = 745.0 * x[4] / (x[1] * x[2]);
            (load * load + 157.5e6).sqrt() / (85.0 * x[6].powi(3)) - 1.0
        }),
        boxed(|x| x[1] * x[2] / 40.0 - 1.0),
        boxed(|x| 5.0 * x[1] / x[0] - 1.0),
        boxed(|x| x[0] / (12.0 * x[1]) - 1.0),
        boxed(|x| (1.5 * x[5] + 1.9) / x[3] - 1.0),
        boxed(|x| (1.1 * x[6] + 1.9) / x[4] - 1.0),
    ];
    (space, objective, constraints)
}

/// Variables `(x1, x2)`: cross-section areas.
fn three_bar_truss() -> Parts {
    let s2 = std::f64::consts::SQRT_2;
    let space = SearchSpace::uniform(2, TRUSS_LOWER, 1.0).unwrap();
    let objective = boxed(move |x| 100.0 * (2.0 * s2 * x[0] + x[1]));
    let constraints = vec![
        boxed(move |x| 2.0 * (s2 * x[0] + x[1]) / (s2 * x[0] * x[0] + 2.0 * x[0] * x[1]) - 2.0),
        boxed(move |x| 2.0 * x[1] / (s2 * x[0] * x[0] + 2.0 * x[0] * x[1]) - 2.0),
        boxed(move |x| 2.0 / (x[0] + s2 * x[1]) - 2.0),
    ];
    (space, objective, constraints)
}
