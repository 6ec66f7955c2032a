//! The seven test functions used for success-rate experiments, with their
//! dimensions, search boxes and known minimizers.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, BasError, Result};
use crate::objective::Objective;
use crate::params::{BasParams, DEFAULT_STEP_FLOOR};
use crate::space::SearchSpace;

/// Iteration budget of a benchmark run.
pub const BENCHMARK_K_MAX: u64 = 100_000;

/// Initial step size of a benchmark run.
pub const BENCHMARK_DELTA0: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkId {
    /// Euclidean norm.
    F1,
    /// Sum plus product of absolute values.
    F2,
    /// Rosenbrock valley.
    F3,
    /// Ackley.
    F4,
    /// Griewank-like, with `cos(x_i) / sqrt(i)` inside the product.
    F5,
    /// Absolute sum damped by `exp(-sum sin(x_i^2))`.
    F6,
    /// Zakharov.
    F7,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 7] = [
        BenchmarkId::F1,
        BenchmarkId::F2,
        BenchmarkId::F3,
        BenchmarkId::F4,
        BenchmarkId::F5,
        BenchmarkId::F6,
        BenchmarkId::F7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkId::F1 => "f1",
            BenchmarkId::F2 => "f2",
            BenchmarkId::F3 => "f3",
            BenchmarkId::F4 => "f4",
            BenchmarkId::F5 => "f5",
            BenchmarkId::F6 => "f6",
            BenchmarkId::F7 => "f7",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            BenchmarkId::F1 => 30,
            BenchmarkId::F2 | BenchmarkId::F7 => 20,
            BenchmarkId::F3 | BenchmarkId::F4 | BenchmarkId::F5 => 10,
            BenchmarkId::F6 => 5,
        }
    }

    /// Identical per-axis `(lb, ub)`.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            BenchmarkId::F6 => (-2.0 * PI, 2.0 * PI),
            _ => (-10.0, 10.0),
        }
    }

    pub fn x_star(self) -> Vec<f64> {
        let fill = if self == BenchmarkId::F3 { 1.0 } else { 0.0 };
        vec![fill; self.dimension()]
    }

    /// Decay rates and floors tuned per function; `delta0 = 10`,
    /// `d_init = ub` and `k_max = 100000` for all of them.
    pub fn default_params(self) -> BasParams {
        let (alpha, d0, c) = match self {
            BenchmarkId::F1 | BenchmarkId::F5 => (0.94, 0.001, 0.94),
            BenchmarkId::F2 => (0.95, 0.001, 0.94),
            BenchmarkId::F3 => (0.7, 0.001, 0.7),
            BenchmarkId::F4 => (0.97, 0.01, 0.97),
            BenchmarkId::F6 => (0.96, 0.1, 0.96),
            BenchmarkId::F7 => (0.8, 0.01, 0.8),
        };
        BasParams {
            alpha,
            c,
            delta0: BENCHMARK_DELTA0,
            d_init: self.bounds().1,
            d0,
            step_floor: DEFAULT_STEP_FLOOR,
            k_max: BENCHMARK_K_MAX,
            seed: 0,
        }
    }

    /// Evaluates the formula without a length check.
    fn value(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkId::F1 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            BenchmarkId::F2 => {
                x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
            }
            BenchmarkId::F3 => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            BenchmarkId::F4 => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            BenchmarkId::F5 => {
                let sq = x.iter().map(|v| v * v).sum::<f64>();
                let prod = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.cos() / ((i + 1) as f64).sqrt())
                    .product::<f64>();
                1.0 + sq / 4000.0 - prod
            }
            BenchmarkId::F6 => {
                let abs = x.iter().map(|v| v.abs()).sum::<f64>();
                let sines = x.iter().map(|v| (v * v).sin()).sum::<f64>();
                abs * (-sines).exp()
            }
            BenchmarkId::F7 => {
                let sq = x.iter().map(|v| v * v).sum::<f64>();
                let weighted = 0.5
                    * x.iter()
                        .enumerate()
                        .map(|(i, v)| (i + 1) as f64 * v)
                        .sum::<f64>();
                sq + weighted.powi(2) + weighted.powi(4)
            }
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkId {
    type Err = BasError;

    fn from_str(s: &str) -> Result<Self> {
        BenchmarkId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| BasError::UnknownProblem(s.to_string()))
    }
}

impl Objective for BenchmarkId {
    fn dimension(&self) -> usize {
        BenchmarkId::dimension(*self)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.value(x)
    }
}

/// A benchmark function together with its search box and minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub id: BenchmarkId,
    pub dimension: usize,
    pub space: SearchSpace,
    pub x_star: Vec<f64>,
    pub lb: f64,
    pub ub: f64,
}

impl BenchmarkSpec {
    pub fn objective(&self) -> BenchmarkId {
        self.id
    }
}

pub fn benchmark(id: BenchmarkId) -> BenchmarkSpec {
    let (lb, ub) = id.bounds();
    let dimension = id.dimension();
    BenchmarkSpec {
        id,
        dimension,
        space: SearchSpace::uniform(dimension, lb, ub).expect("benchmark bounds are valid"),
        x_star: id.x_star(),
        lb,
        ub,
    }
}

/// Looks a benchmark up by its lowercase id (`"f1"` .. `"f7"`).
pub fn benchmark_by_name(name: &str) -> Result<BenchmarkSpec> {
    name.parse().map(benchmark)
}

pub fn eval_benchmark(id: BenchmarkId, x: &[f64]) -> Result<f64> {
    check_dim(id.dimension(), x.len())?;
    Ok(id.value(x))
}
