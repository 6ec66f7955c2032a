//! `bas`: run beetle antennae search on the bundled benchmark functions and
//! engineering design problems.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bas_core::{
    engineering_problem, render_results, run_experiment, BasError, BasParams, ExperimentConfig,
    ExperimentReport, ExportFormat, ProblemId,
};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bas", version, about = "Beetle antennae search optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List problem ids with their dimensions and default parameters.
    List,
    /// Run a single search and print the best point.
    Solve(RunArgs),
    /// Run repeated searches and print aggregate statistics.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Problem id: f1..f7, spring, speed_reducer or three_bar_truss.
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta0: Option<f64>,
    #[arg(long = "d-init", allow_negative_numbers = true)]
    d_init: Option<f64>,
    #[arg(long = "step-floor", allow_negative_numbers = true)]
    step_floor: Option<f64>,
    /// Penalty weight (engineering problems).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// Write the result file here; `-` writes it to stdout instead of the summary.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ExportFormat,
    /// Stop each benchmark run once it lands within the success radius.
    #[arg(long)]
    early_stop: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 100)]
    runs: usize,
}

/// A failure tied to the command-line flag that caused it.
struct Failure {
    flag: Option<&'static str>,
    error: BasError,
}

impl From<BasError> for Failure {
    fn from(error: BasError) -> Self {
        let flag = match &error {
            BasError::InvalidParam { name, .. } => Some(match *name {
                "alpha" => "--alpha",
                "c" => "--c",
                "d0" => "--d0",
                "delta0" => "--delta0",
                "d_init" => "--d-init",
                "step_floor" => "--step-floor",
                "rho" => "--rho",
                "runs" => "--runs",
                "threads" => "--threads",
                _ => "--problem",
            }),
            BasError::UnknownProblem(_) => Some("--problem"),
            BasError::Io { .. } => Some("--out"),
            _ => None,
        };
        Self { flag, error }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { flag, error }) => {
            match flag {
                Some(flag) => eprintln!("error: {flag}: {error}"),
                None => eprintln!("error: {error}"),
            }
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::List => {
            print!("{}", list());
            Ok(())
        }
        Command::Solve(args) => {
            let config = config(&args, 1)?;
            let report = run_experiment(&config)?;
            emit(&args, &report, solve_summary(&config, &report))
        }
        Command::Bench(args) => {
            let config = config(&args.run, args.runs)?;
            let report = run_experiment(&config)?;
            emit(&args.run, &report, bench_summary(&config, &report))
        }
    }
}

fn config(args: &RunArgs, n_runs: usize) -> Result<ExperimentConfig, Failure> {
    let problem: ProblemId = args.problem.parse()?;
    let mut config = ExperimentConfig::new(problem, n_runs, args.seed);
    let defaults = config.params;
    config.params = BasParams {
        alpha: args.alpha.unwrap_or(defaults.alpha),
        c: args.c.unwrap_or(defaults.c),
        delta0: args.delta0.unwrap_or(defaults.delta0),
        d_init: args.d_init.unwrap_or(defaults.d_init),
        d0: args.d0.unwrap_or(defaults.d0),
        step_floor: args.step_floor.unwrap_or(defaults.step_floor),
        k_max: args.kmax.unwrap_or(defaults.k_max),
        seed: args.seed,
    };
    config.params.validate()?;
    if let Some(rho) = args.rho {
        if !matches!(problem, ProblemId::Engineering(_)) {
            return Err(Failure {
                flag: Some("--rho"),
                error: BasError::InvalidParam {
                    name: "rho",
                    reason: format!("{problem} has no constraints to penalize"),
                },
            });
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(BasError::InvalidParam {
                name: "rho",
                reason: format!("must be positive and finite, got {rho}"),
            }
            .into());
        }
        config.rho = Some(rho);
    }
    if let Some(threads) = args.threads {
        if threads == 0 {
            return Err(BasError::InvalidParam {
                name: "threads",
                reason: "must be at least 1".into(),
            }
            .into());
        }
        config.threads = Some(threads);
    }
    config.early_stop = args.early_stop;
    Ok(config)
}

fn emit(args: &RunArgs, report: &ExperimentReport, summary: String) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    let stdout_err = |source| Failure {
        flag: None,
        error: BasError::Io {
            path: "<stdout>".into(),
            source,
        },
    };
    match &args.out {
        Some(path) if path.as_os_str() == "-" => {
            render_results(report, args.format, &mut stdout).map_err(stdout_err)
        }
        Some(path) => {
            bas_core::export_results(report, args.format, path)?;
            stdout.write_all(summary.as_bytes()).map_err(stdout_err)
        }
        None => stdout.write_all(summary.as_bytes()).map_err(stdout_err),
    }
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(f64::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn list() -> String {
    let mut out = String::new();
    for problem in ProblemId::all() {
        let p = problem.default_params();
        let _ = write!(
            out,
            "{:<16} n={:<3} alpha={} c={} d0={} delta0={} d_init={} step_floor={} kmax={}",
            problem.as_str(),
            problem.dimension(),
            p.alpha,
            p.c,
            p.d0,
            p.delta0,
            p.d_init,
            p.step_floor,
            p.k_max,
        );
        if let Some(rho) = problem.default_rho() {
            let _ = write!(out, " rho={rho}");
        }
        out.push('\n');
    }
    out
}

fn solve_summary(config: &ExperimentConfig, report: &ExperimentReport) -> String {
    let record = &report.runs[0];
    let r = &record.result;
    let mut out = String::new();
    let _ = writeln!(out, "problem: {}", config.problem);
    let _ = writeln!(out, "seed: {}", r.seed);
    let _ = writeln!(out, "x_best: {}", vector(&r.x_best));
    let _ = writeln!(out, "f_best: {}", r.f_best);
    let _ = writeln!(out, "iterations: {}", r.iterations);
    let _ = writeln!(out, "evaluations: {}", r.evaluations);
    if let Some(success) = record.success {
        let _ = writeln!(out, "success: {success}");
    }
    if let (Some(f_raw), Some(report)) = (record.f_raw, &record.feasibility) {
        let _ = writeln!(out, "f_raw: {f_raw}");
        let _ = writeln!(out, "constraints: {}", vector(&report.constraint_values));
        let _ = writeln!(out, "max_violation: {}", report.max_violation);
        let _ = writeln!(out, "in_bounds: {}", report.in_bounds);
    }
    out
}

fn bench_summary(config: &ExperimentConfig, report: &ExperimentReport) -> String {
    let s = &report.stats;
    let rate = s
        .success_rate
        .map(|v| v.to_string())
        .unwrap_or_else(|| "-".into());
    let mut out = format!(
        "problem\truns\tsuccess_rate\tbest_f\tmean_f\tstd_f\n{}\t{}\t{}\t{}\t{}\t{}\n",
        config.problem, s.n_runs, rate, s.best_f, s.mean_f, s.std_f
    );
    if let ProblemId::Engineering(id) = config.problem {
        // Best run by penalized value, reported on the raw objective.
        let best = report
            .runs
            .iter()
            .min_by(|a, b| a.result.f_best.total_cmp(&b.result.f_best))
            .expect("at least one run");
        let feasible = report
            .runs
            .iter()
            .filter(|r| r.feasibility.as_ref().is_some_and(|f| f.is_feasible()))
            .count();
        let _ = writeln!(out, "best_x: {}", vector(&best.result.x_best));
        if let (Some(f_raw), Some(f)) = (best.f_raw, &best.feasibility) {
            let _ = writeln!(out, "best_f_raw: {f_raw}");
            let _ = writeln!(out, "best_max_violation: {}", f.max_violation);
        }
        let _ = writeln!(
            out,
            "feasible_runs: {feasible}/{} ({} constraints)",
            s.n_runs,
            engineering_problem(id).num_constraints()
        );
    }
    out
}
