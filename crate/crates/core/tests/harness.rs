use bas_core::*;

fn quick(problem: ProblemId, runs: usize, seed: u64) -> ExperimentConfig {
    let mut config = ExperimentConfig::new(problem, runs, seed);
    config.params.k_max = 400;
    config
}

#[test]
fn single_run_statistics() {
    let report = run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F7), 1, 3)).unwrap();
    let s = &report.stats;
    assert_eq!(s.n_runs, 1);
    assert_eq!(s.std_f, 0.0);
    assert_eq!(s.best_f, s.mean_f);
    assert!(s.success_rate.is_some());
}

#[test]
fn stats_match_per_run_values() {
    let report = run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F6), 25, 8)).unwrap();
    let values: Vec<f64> = report.runs.iter().map(|r| r.result.f_best).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s = &report.stats;
    assert_eq!(s.best_f, min);
    assert!(s.best_f <= s.mean_f && s.mean_f <= max);
    assert!(s.std_f >= 0.0);

    let spec = benchmark(BenchmarkId::F6);
    let recount = report
        .runs
        .iter()
        .filter(|r| is_success(&r.result.x_best, &spec.x_star, spec.lb, spec.ub).unwrap())
        .count();
    assert_eq!(s.success_rate.unwrap(), 100.0 * recount as f64 / 25.0);
    for (j, r) in report.runs.iter().enumerate() {
        assert_eq!(r.run, j);
        assert_eq!(r.result.seed, derive_seed(8, j as u64));
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let mut config = quick(ProblemId::Benchmark(BenchmarkId::F2), 12, 77);
    config.keep_traces = true;
    config.threads = Some(1);
    let serial = run_experiment(&config).unwrap();
    config.threads = Some(4);
    let parallel = run_experiment(&config).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn adding_runs_keeps_earlier_runs() {
    let small = run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F1), 3, 5)).unwrap();
    let large = run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F1), 6, 5)).unwrap();
    assert_eq!(small.runs[..], large.runs[..3]);
}

#[test]
fn engineering_runs_report_feasibility() {
    let report =
        run_experiment(&quick(ProblemId::Engineering(EngineeringId::Spring), 4, 1)).unwrap();
    assert!(report.stats.success_rate.is_none());
    for r in &report.runs {
        assert!(r.success.is_none());
        let f = r.feasibility.as_ref().unwrap();
        assert_eq!(f.constraint_values.len(), 4);
        assert!(f.in_bounds);
        assert!(r.f_raw.unwrap() <= r.result.f_best);
    }
}

#[test]
fn early_stop_ends_at_success() {
    let mut config = ExperimentConfig::new(ProblemId::Benchmark(BenchmarkId::F7), 5, 2);
    config.early_stop = true;
    let report = run_experiment(&config).unwrap();
    for r in &report.runs {
        assert_eq!(r.success, Some(true));
        assert!(r.result.iterations < config.params.k_max);
    }
}

#[test]
fn rejects_zero_runs() {
    assert!(run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F1), 0, 0)).is_err());
}

#[test]
fn csv_export_has_header_and_rows() {
    let report = run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F5), 2, 4)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.csv");
    export_results(&report, ExportFormat::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "run,seed,f_best,evaluations,success");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "0");
    assert_eq!(
        fields[2].parse::<f64>().unwrap(),
        report.runs[0].result.f_best
    );
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn json_round_trip_reproduces_stats() {
    let mut config = quick(ProblemId::Engineering(EngineeringId::ThreeBarTruss), 3, 9);
    let dir = tempfile::tempdir().unwrap();

    let path = dir.path().join("out.json");
    let report = run_experiment(&config).unwrap();
    export_results(&report, ExportFormat::Json, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value.get("stats").is_some());
    assert_eq!(value["runs"].as_array().unwrap().len(), 3);
    assert!(value["runs"][0].get("trace").is_none());
    let back = read_json_report(&path).unwrap();
    assert_eq!(back, report);

    config.keep_traces = true;
    let traced = run_experiment(&config).unwrap();
    export_results(&traced, ExportFormat::Json, &path).unwrap();
    let back = read_json_report(&path).unwrap();
    assert_eq!(back.runs[0].result.trace.len(), 401);
    assert_eq!(back, traced);
}

#[test]
fn export_errors_name_the_path() {
    let report = run_experiment(&quick(ProblemId::Benchmark(BenchmarkId::F5), 1, 4)).unwrap();
    let path = std::path::Path::new("/nonexistent-dir/out.csv");
    let err = export_results(&report, ExportFormat::Csv, path).unwrap_err();
    assert!(matches!(err, BasError::Io { .. }));
    assert!(err.to_string().contains("/nonexistent-dir/out.csv"));
}
