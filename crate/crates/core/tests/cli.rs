use std::fs;
use std::path::Path;

use ratio_consensus::cli::{execute, EXIT_ASSUMPTION, EXIT_INVALID, EXIT_NOT_CONVERGED, EXIT_OK};
use ratio_consensus::io::{self, read_trace, SCHEDULE_FILE, SUMMARY_FILE, TRACE_FILE};
use ratio_consensus::Outcome;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("ratio-consensus").chain(args.iter().copied());
    let code = execute(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key))
        .and_then(|v| v.strip_prefix('='))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .parse()
        .unwrap()
}

#[test]
fn counterexample_run_reaches_average() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ce");
    let (code, stdout) = run(&[
        "run",
        "--schedule",
        "counterexample:section5",
        "--x0",
        "2,3,2,2,2,10",
        "--n-prime",
        "5",
        "--rho",
        "0.01",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    assert!(field(&stdout, "avg_error") < 0.01);
    assert!(field(&stdout, "spread") < 0.01);

    let artifact = read_trace(&out).unwrap();
    assert_eq!(artifact.config.schedule, "counterexample:section5");
    assert_eq!(artifact.config.n_prime, 5);
    let stop = match artifact.result.outcome {
        Outcome::Terminated { k, .. } => k,
        ref other => panic!("{other:?}"),
    };
    assert_eq!(artifact.trace.len(), stop + 1);
    assert!(artifact.result.final_ratios.iter().all(|r| (r - 3.5).abs() < 0.01));

    let schedule = io::read_schedule(out.join(SCHEDULE_FILE)).unwrap();
    assert_eq!(schedule.horizon(), Some(stop));
}

#[test]
fn random_pool_run_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = |out: &Path| {
        vec![
            "run".to_string(),
            "--n".into(),
            "10".into(),
            "--rho".into(),
            "0.01".into(),
            "--schedule".into(),
            "random-pool:100".into(),
            "--x0".into(),
            "uniform:42".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.to_str().unwrap().to_string(),
        ]
    };
    let argv_a = args(&a);
    let argv_b = args(&b);
    let (code_a, line_a) = run(&argv_a.iter().map(String::as_str).collect::<Vec<_>>());
    let (code_b, line_b) = run(&argv_b.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!((code_a, code_b), (EXIT_OK, EXIT_OK));
    assert_eq!(line_a, line_b);
    assert!(field(&line_a, "spread") < 0.01);
    assert_eq!(field(&line_a, "stop_k") as usize % 10, 0);
    for file in [TRACE_FILE, SUMMARY_FILE, SCHEDULE_FILE] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn equal_values_stop_at_first_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.txt");
    fs::write(&path, "n=3 horizon=10\n0: 0>1 1>2 2>0\n1: 0>1 1>2 2>0\n2: 0>1 1>2 2>0\n3: 0>1 1>2 2>0\n4: 0>1 1>2 2>0\n5: 0>1 1>2 2>0\n6: 0>1 1>2 2>0\n7: 0>1 1>2 2>0\n8: 0>1 1>2 2>0\n9: 0>1 1>2 2>0\n").unwrap();
    let spec = format!("file:{}", path.display());
    let (code, stdout) = run(&["run", "--schedule", &spec, "--x0", "5,5,5"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.starts_with("stop_k=3 terminated epoch=1"), "{stdout}");
    assert_eq!(field(&stdout, "spread"), 0.0);
}

#[test]
fn unsound_epoch_needs_failure_demo() {
    let base = ["run", "--schedule", "counterexample:section5", "--x0", "2,3,2,2,2,10", "--n-prime", "3"];
    let (code, _) = run(&base);
    assert_eq!(code, EXIT_ASSUMPTION);
    let mut with_flag = base.to_vec();
    with_flag.push("--failure-demo");
    let (code, _) = run(&with_flag);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn non_convergence_exit_code() {
    let (code, stdout) = run(&[
        "run",
        "--schedule",
        "counterexample:section5",
        "--x0",
        "2,3,2,2,2,10",
        "--max-iters",
        "7",
    ]);
    assert_eq!(code, EXIT_NOT_CONVERGED);
    assert!(stdout.contains("max-iters"));
}

#[test]
fn invalid_flags() {
    assert_eq!(run(&["run", "--schedule", "random-pool:10", "--x0", "uniform:1"]).0, EXIT_INVALID);
    assert_eq!(run(&["run", "--schedule", "counterexample:table1", "--x0", "1,2"]).0, EXIT_INVALID);
    assert_eq!(run(&["run", "--schedule", "file:/nonexistent/x.txt", "--x0", "1"]).0, EXIT_INVALID);
    assert_eq!(run(&["verify", "--schedule", "random-pool:3", "--n", "4"]).0, EXIT_INVALID);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn verify_counterexample_schedule() {
    let (code, stdout) = run(&["verify", "--schedule", "counterexample:table1", "--l", "1", "--horizon", "20"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("per-step strongly connected: true"), "{stdout}");
    assert!(stdout.contains("max diameter D_max: 3"));
    assert!(stdout.contains("safe epoch length n': 5"));
}

#[test]
fn verify_random_pool_passes() {
    let (code, stdout) = run(&["verify", "--schedule", "random-pool:100", "--n", "10", "--horizon", "200", "--seed", "3"]);
    assert_eq!(code, EXIT_OK, "{stdout}");
}

#[test]
fn verify_isolated_node_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("isolated.txt");
    // node 3 never sends or receives
    fs::write(&path, "n=4 horizon=4\n0: 0>1 1>2 2>0\n1: 0>2 2>1 1>0\n2: 0>1 1>2 2>0\n3: 0>1 1>0 1>2 2>1\n").unwrap();
    let spec = format!("file:{}", path.display());
    let (code, stdout) = run(&["verify", "--schedule", &spec, "--l", "4"]);
    assert_eq!(code, EXIT_ASSUMPTION, "{stdout}");
    assert!(stdout.contains("FAIL"));

    let (code, _) = run(&["run", "--schedule", &spec, "--x0", "1,2,3,4"]);
    assert_eq!(code, EXIT_ASSUMPTION);
}

#[test]
fn counterexample_command_writes_both_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run(&["counterexample", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{report}");
    assert!(report.contains("n' = 3 (largest diameter)"));
    assert!(report.contains("missed by nodes [0, 1]"));
    assert!(report.contains("n' = 5 (n - 1)"));
    assert!(report.contains("every epoch captured the global extremes"));
    assert_eq!(fs::read_to_string(dir.path().join("report.txt")).unwrap(), report);

    let short = read_trace(dir.path().join("nprime3")).unwrap();
    assert!(short.config.failure_demo);
    // some boundary row shows node 0 holding a max estimate below the true one
    let first = &short.result.epochs[0];
    assert!(first.alpha_max[0] < first.target_max);

    let sound = read_trace(dir.path().join("nprime5")).unwrap();
    assert!(!sound.config.failure_demo);
    assert!(sound.result.epochs.iter().all(|e| e.missed_max.is_empty() && e.missed_min.is_empty()));
}
