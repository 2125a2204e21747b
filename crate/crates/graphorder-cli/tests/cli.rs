//! End-to-end runs of the installed binary: exit-code contract (0 ok,
//! 2 budget/check failure, 3 io/config/domain) and file round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphorder"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("graphorder-cli-{}-{name}", std::process::id()))
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn unknown_flag_exits_three() {
    assert_eq!(
        run(&["alpha", "--c", "2", "--bogus"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
}

#[test]
fn alpha_at_two_prints_one() {
    let output = run(&["alpha", "--c", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let value: f64 = stdout(&output).trim().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-10);
}

#[test]
fn dim_reports_exact_value_and_budget_exit() {
    let poset = tmp("s3.poset");
    std::fs::write(&poset, "n 6\n1 5\n1 6\n2 4\n2 6\n3 4\n3 5\n").unwrap();
    let poset = poset.to_str().unwrap();

    let witness = tmp("s3.realiser");
    let output = run(&["dim", poset, "--witness", witness.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "dimension 3");
    let lines = std::fs::read_to_string(&witness).unwrap();
    assert_eq!(lines.lines().count(), 3);
    for line in lines.lines() {
        let mut labels: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        labels.sort_unstable();
        assert_eq!(labels, (1..=6).collect::<Vec<_>>());
    }

    assert_eq!(run(&["dim", poset, "--kmax", "2"]).status.code(), Some(2));
    assert_eq!(run(&["dim", "/nonexistent.poset"]).status.code(), Some(3));

    let _ = std::fs::remove_file(poset);
    let _ = std::fs::remove_file(witness);
}

#[test]
fn sample_then_dim_round_trip() {
    let poset = tmp("gnp.poset");
    let status = run(&[
        "sample",
        "--model",
        "gnp",
        "--n",
        "40",
        "--c",
        "1.2",
        "--seed",
        "9",
        "--poset-out",
        poset.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    let header = std::fs::read_to_string(&poset).unwrap();
    assert!(
        header.starts_with("n 40\n"),
        "unexpected header: {header:.20}"
    );

    let output = run(&["dim", poset.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).starts_with("dimension "));
    let _ = std::fs::remove_file(poset);
}

#[test]
fn verify_pmf_exhaustive_and_monte_carlo() {
    let output = run(&[
        "experiment",
        "verify-pmf",
        "--sizeV",
        "2",
        "--sizeU",
        "3",
        "--q",
        "1/3",
    ]);
    assert_eq!(output.status.code(), Some(0), "stdout: {}", stdout(&output));

    let output = run(&[
        "experiment",
        "verify-pmf",
        "--sizeV",
        "3",
        "--sizeU",
        "6",
        "--q",
        "0.4",
        "--trials",
        "20000",
        "--seed",
        "5",
    ]);
    assert_eq!(output.status.code(), Some(0), "stdout: {}", stdout(&output));

    // Exhaustive mode cannot cover more than 7 vertices.
    let output = run(&[
        "experiment",
        "verify-pmf",
        "--sizeV",
        "3",
        "--sizeU",
        "6",
        "--q",
        "1/3",
        "--exact",
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn experiment_run_writes_records_and_summary() {
    let stem = tmp("exp");
    let config = tmp("exp.json");
    std::fs::write(
        &config,
        format!(
            r#"{{
  "schema": 1,
  "spec": {{ "model": "gnp", "n": 12, "c": 1.0, "seed": 3 }},
  "trials": 25,
  "checks": ["dim", "width", "inc-pairs"],
  "k_max": 6,
  "output": "{}"
}}"#,
            stem.display()
        ),
    )
    .unwrap();
    let output = run(&["experiment", "run", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "stdout: {}", stdout(&output));
    let records = std::fs::read_to_string(stem.with_extension("jsonl")).unwrap();
    assert_eq!(records.lines().count(), 25);
    assert!(records.lines().all(|l| l.contains("\"dimension\"")));
    let summary = std::fs::read_to_string(format!("{}_summary.csv", stem.display())).unwrap();
    assert!(summary.lines().count() >= 2);

    let _ = std::fs::remove_file(stem.with_extension("jsonl"));
    let _ = std::fs::remove_file(format!("{}_summary.csv", stem.display()));
    let _ = std::fs::remove_file(config);
}

#[test]
fn bound_curves_emit_csv() {
    let output = run(&["bound", "bipartite", "--c-range", "2:3:0.5"]);
    assert_eq!(output.status.code(), Some(0));
    let body = stdout(&output);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("c,bound"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 2.0);
    assert!((first[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);

    // Domain error: the bipartite curve starts at c = 2.
    assert_eq!(
        run(&["bound", "bipartite", "--c-range", "1:3:0.5"])
            .status
            .code(),
        Some(3)
    );
}
