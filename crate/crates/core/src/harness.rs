//! Repeated seeded runs, the success-rate metric and aggregate statistics.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bas::{run_with_rng, BasRng, RunResult};
use crate::benchmarks::{benchmark, BenchmarkId};
use crate::constrained::{
    engineering_problem, feasibility, penalized_objective, EngineeringId, FeasibilityReport,
};
use crate::error::{check_dim, BasError, Result};
use crate::params::BasParams;
use crate::space::SearchSpace;

/// Either a benchmark function or an engineering design problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemId {
    Benchmark(BenchmarkId),
    Engineering(EngineeringId),
}

impl ProblemId {
    pub fn all() -> impl Iterator<Item = ProblemId> {
        BenchmarkId::ALL
            .into_iter()
            .map(ProblemId::Benchmark)
            .chain(EngineeringId::ALL.into_iter().map(ProblemId::Engineering))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Benchmark(id) => id.as_str(),
            ProblemId::Engineering(id) => id.as_str(),
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            ProblemId::Benchmark(id) => id.dimension(),
            ProblemId::Engineering(id) => engineering_problem(id).dim(),
        }
    }

    pub fn default_params(self) -> BasParams {
        match self {
            ProblemId::Benchmark(id) => id.default_params(),
            ProblemId::Engineering(id) => id.default_params(),
        }
    }

    pub fn default_rho(self) -> Option<f64> {
        match self {
            ProblemId::Benchmark(_) => None,
            ProblemId::Engineering(id) => Some(id.default_rho()),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = BasError;

    fn from_str(s: &str) -> Result<Self> {
        s.parse()
            .map(ProblemId::Benchmark)
            .or_else(|_| s.parse().map(ProblemId::Engineering))
    }
}

/// True iff `sum_i (x_i - x*_i)^2 <= (ub - lb) * 1e-4`.
pub fn is_success(x_best: &[f64], x_star: &[f64], lb: f64, ub: f64) -> Result<bool> {
    check_dim(x_star.len(), x_best.len())?;
    let dist2: f64 = x_best
        .iter()
        .zip(x_star)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(dist2 <= (ub - lb) * 1e-4)
}

/// Percentage of successful trials.
pub fn success_rate(outcomes: &[bool]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(BasError::EmptyOutcomes);
    }
    let hits = outcomes.iter().filter(|&&ok| ok).count();
    Ok(100.0 * hits as f64 / outcomes.len() as f64)
}

/// Uniform draw inside a bounded box.
pub fn random_init<R: Rng + ?Sized>(space: &SearchSpace, rng: &mut R) -> Result<Vec<f64>> {
    if !space.is_bounded() {
        return Err(BasError::UnboundedSpace);
    }
    Ok(space
        .lower()
        .iter()
        .zip(space.upper())
        .map(|(&lo, &hi)| rng.random_range(lo..=hi))
        .collect())
}

/// Seed of run `index` in an experiment with base seed `base`.
///
/// `splitmix64(base + (index + 1) * GOLDEN)`, so each run's stream depends
/// only on its own index and adding runs leaves earlier runs untouched.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    /// `params.seed` is the base from which per-run seeds are derived.
    pub params: BasParams,
    pub n_runs: usize,
    /// Penalty weight for engineering problems; `None` keeps the default.
    pub rho: Option<f64>,
    /// Known minimizer; enables the success rate.
    pub success_reference: Option<Vec<f64>>,
    /// Stop a run as soon as its best point satisfies [`is_success`].
    pub early_stop: bool,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Keep per-iteration traces in the returned results.
    pub keep_traces: bool,
}

impl ExperimentConfig {
    /// Default parameters for `problem`, with the benchmark minimizer as the
    /// success reference when there is one.
    pub fn new(problem: ProblemId, n_runs: usize, seed: u64) -> Self {
        let success_reference = match problem {
            ProblemId::Benchmark(id) => Some(id.x_star()),
            ProblemId::Engineering(_) => None,
        };
        Self {
            problem,
            params: BasParams {
                seed,
                ..problem.default_params()
            },
            n_runs,
            rho: problem.default_rho(),
            success_reference,
            early_stop: false,
            threads: None,
            keep_traces: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    pub best_f: f64,
    pub mean_f: f64,
    /// Population standard deviation (divides by `n_runs`).
    pub std_f: f64,
    pub n_runs: usize,
}

impl ExperimentStats {
    pub fn from_values(values: &[f64], success_rate: Option<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(BasError::EmptyOutcomes);
        }
        let n = values.len() as f64;
        let best_f = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean_f = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean_f).powi(2)).sum::<f64>() / n;
        Ok(Self {
            success_rate,
            // Summation rounding can push the mean a hair outside [min, max].
            mean_f: mean_f.clamp(
                best_f,
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
            best_f,
            std_f: var.sqrt(),
            n_runs: values.len(),
        })
    }
}

/// A run plus its per-problem verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    #[serde(flatten)]
    pub result: RunResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success: Option<bool>,
    /// Unpenalized objective at `x_best` (engineering problems only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_raw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<FeasibilityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub stats: ExperimentStats,
    pub runs: Vec<RunRecord>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.n_runs == 0 {
        return Err(BasError::InvalidParam {
            name: "runs",
            reason: "must be at least 1".into(),
        });
    }
    config.params.validate()?;
    if let Some(reference) = &config.success_reference {
        check_dim(config.problem.dimension(), reference.len())?;
    }

    let work = || -> Result<Vec<RunRecord>> {
        (0..config.n_runs)
            .into_par_iter()
            .map(|j| single_run(config, j))
            .collect()
    };
    let runs = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| BasError::InvalidParam {
                name: "threads",
                reason: e.to_string(),
            })?
            .install(work)?,
        None => work()?,
    };

    let values: Vec<f64> = runs.iter().map(|r| r.result.f_best).collect();
    let rate = match config.success_reference {
        Some(_) => {
            let outcomes: Vec<bool> = runs.iter().map(|r| r.success == Some(true)).collect();
            Some(success_rate(&outcomes)?)
        }
        None => None,
    };
    Ok(ExperimentReport {
        stats: ExperimentStats::from_values(&values, rate)?,
        runs,
    })
}

fn single_run(config: &ExperimentConfig, index: usize) -> Result<RunRecord> {
    let seed = derive_seed(config.params.seed, index as u64);
    let mut rng = BasRng::seed_from_u64(seed);
    let params = BasParams {
        seed,
        ..config.params
    };
    let reference = config.success_reference.as_deref();

    let (mut result, success, f_raw, report) = match config.problem {
        ProblemId::Benchmark(id) => {
            let spec = benchmark(id);
            let x0 = random_init(&spec.space, &mut rng)?;
            let (lb, ub) = (spec.lb, spec.ub);
            let result = run_with_rng(&id, &spec.space, &x0, &params, &mut rng, |x, _| {
                config.early_stop
                    && reference.is_some_and(|r| is_success(x, r, lb, ub).unwrap_or(false))
            })?;
            let success = reference
                .map(|r| is_success(&result.x_best, r, lb, ub))
                .transpose()?;
            (result, success, None, None)
        }
        ProblemId::Engineering(id) => {
            let mut problem = engineering_problem(id);
            if let Some(rho) = config.rho {
                problem = problem.with_rho(rho)?;
            }
            let x0 = random_init(problem.space(), &mut rng)?;
            let objective = penalized_objective(&problem);
            let result = run_with_rng(
                &objective,
                problem.space(),
                &x0,
                &params,
                &mut rng,
                |_, _| false,
            )?;
            let report = feasibility(&problem, &result.x_best)?;
            let f_raw = problem.objective_value(&result.x_best)?;
            (result, None, Some(f_raw), Some(report))
        }
    };
    result.seed = seed;
    if !config.keep_traces {
        result.trace = Vec::new();
    }
    Ok(RunRecord {
        run: index,
        result,
        success,
        f_raw,
        feasibility: report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    #[default]
    Json,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Per-run CSV header.
pub const CSV_HEADER: [&str; 5] = ["run", "seed", "f_best", "evaluations", "success"];

/// Serializes a report. CSV holds one row per run; the `success` column is
/// empty when the problem has no known minimizer. JSON holds `stats` and
/// `runs`.
pub fn render_results<W: Write>(
    report: &ExperimentReport,
    format: ExportFormat,
    out: W,
) -> std::io::Result<()> {
    match format {
        ExportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            out.write_all(b"\n")?;
            out.flush()
        }
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in &report.runs {
                w.write_record([
                    r.run.to_string(),
                    r.result.seed.to_string(),
                    r.result.f_best.to_string(),
                    r.result.evaluations.to_string(),
                    r.success.map(|s| s.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()
        }
    }
}

pub fn export_results(
    report: &ExperimentReport,
    format: ExportFormat,
    destination: &Path,
) -> Result<()> {
    let io_err = |source| BasError::Io {
        path: destination.to_path_buf(),
        source,
    };
    let file = File::create(destination).map_err(io_err)?;
    render_results(report, format, BufWriter::new(file)).map_err(io_err)
}

/// Reads a JSON report written by [`export_results`].
pub fn read_json_report(path: &Path) -> Result<ExperimentReport> {
    let file = File::open(path).map_err(|source| BasError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|source| BasError::Json {
        path: path.to_path_buf(),
        source,
    })
}
