//! Beetle antennae search (BAS): a single-agent, derivative-free global
//! minimizer, with a benchmark suite, a success-rate experiment harness and
//! penalty-method engineering design problems.
//!
//! ```
//! use bas_core::{run, BasParams, FnObjective, SearchSpace};
//!
//! let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
//! let sphere = FnObjective::new(2, |x: &[f64]| x.iter().map(|v| v * v).sum());
//! let params = BasParams { k_max: 2_000, ..Default::default() };
//! let result = run(&sphere, &space, &[3.0, -4.0], &params).unwrap();
//! assert!(result.f_best < 1e-2);
//! ```

pub mod bas;
pub mod benchmarks;
pub mod constrained;
pub mod error;
pub mod harness;
pub mod objective;
pub mod params;
pub mod space;

pub use bas::{
    antennae_points, bas_step, bas_step_with_direction, run, run_until, run_with_rng,
    sample_direction, update_schedules, BasRng, BeetleState, RunResult,
};
pub use benchmarks::{benchmark, benchmark_by_name, eval_benchmark, BenchmarkId, BenchmarkSpec};
pub use constrained::{
    engineering_problem, feasibility, penalized_objective, ConstrainedProblem, EngineeringId,
    FeasibilityReport, Penalized,
};
pub use error::{BasError, Result};
pub use harness::{
    derive_seed, export_results, is_success, random_init, read_json_report, render_results,
    run_experiment, success_rate, ExperimentConfig, ExperimentReport, ExperimentStats,
    ExportFormat, ProblemId, RunRecord,
};
pub use objective::{FnObjective, Objective};
pub use params::BasParams;
pub use space::SearchSpace;
