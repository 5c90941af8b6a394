//! Binary-level contract tests: exit codes, output formats, tolerance
//! resolution, and file output.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfspace"))
        .args(args)
        .env_remove("HALFSPACE_TOL_REL")
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfspace"))
        .args(args)
        .env("HALFSPACE_TOL_REL", value)
        .output()
        .expect("binary runs")
}

#[test]
fn usage_and_help_exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1), "missing subcommand");
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        run(&["constants", "--dimension", "5"]).status.code(),
        Some(1),
        "unknown flag"
    );
    assert_eq!(run(&["constants", "--dim", "2"]).status.code(), Some(1));
    assert_eq!(
        run(&["thresholds", "--dim-range", "4..3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["thresholds", "--dim-range", "3..4", "--format", "yaml"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn check_failure_exits_two() {
    // A legal but coarse grid leaves the corrected slope outside the 3%
    // tolerance; the computation succeeds, the check fails.
    let out = run(&[
        "asymptotics",
        "--dim",
        "3",
        "--family",
        "u",
        "--quantity",
        "Q",
        "--q",
        "3",
        "--eps",
        "0.2,0.19,0.18,0.17",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("false"));
}

#[test]
fn geometry_failure_exits_four() {
    // At this lambda and scale the quadratic coefficient goes negative,
    // so there is no mountain-pass structure on the fiber.
    let out = run(&[
        "fiber", "--dim", "4", "--a", "1", "--lambda", "12", "--mu", "0", "--q", "2", "--eps",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn quadrature_failure_exits_three() {
    // Tolerances below machine precision exhaust the subdivision budget.
    let out = run(&[
        "constants",
        "--dim",
        "5",
        "--tol-abs",
        "1e-308",
        "--tol-rel",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn csv_and_json_carry_identical_field_sets() {
    let csv = run(&["thresholds", "--dim-range", "3..4"]);
    let json = run(&["thresholds", "--dim-range", "3..4", "--format", "json"]);
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));

    let csv_text = String::from_utf8(csv.stdout).unwrap();
    let header: Vec<&str> = csv_text.lines().next().unwrap().split(',').collect();
    let json_text = String::from_utf8(json.stdout).unwrap();
    let record = json_text
        .lines()
        .find(|l| l.trim_start().starts_with('{'))
        .unwrap();
    for column in &header {
        assert!(
            record.contains(&format!("\"{column}\":")),
            "JSON record misses column {column}: {record}"
        );
    }
    // Threshold rows contain no string cells, so every colon separates a
    // key from its value.
    assert_eq!(
        record.matches(':').count(),
        header.len(),
        "JSON record has extra fields"
    );
}

#[test]
fn tolerance_environment_variable_is_honored() {
    // Invalid value: rejected as a usage error unless the flag overrides
    // it (the flag wins, so the variable is never read).
    assert_eq!(
        run_with_env(&["thresholds", "--dim-range", "3..4"], "abc")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run_with_env(
            &["thresholds", "--dim-range", "3..4", "--tol-rel", "1e-8"],
            "abc"
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        run_with_env(&["thresholds", "--dim-range", "3..4"], "1e-6")
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "thresholds",
        "--dim-range",
        "3..4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "report should go to the file");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,lambda_bar,lambda_hat"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn negative_values_are_accepted_where_meaningful() {
    // Range strings and lambda/mu may legitimately start with a hyphen.
    let out = run(&[
        "region",
        "--dim",
        "5",
        "--a",
        "1",
        "--q",
        "2",
        "--lambda-range",
        "0:2.5:0.5",
        "--mu-range",
        "-0.5:0.5:0.5",
        "--mu1-upper",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-0.5"), "negative mu rows missing");
    let negative_lambda = run(&[
        "fiber", "--dim", "5", "--a", "1", "--lambda", "-0.5", "--eps", "0.05",
    ]);
    assert_eq!(negative_lambda.status.code(), Some(0));
}

#[test]
fn region_rerun_is_byte_identical() {
    let args = [
        "region",
        "--dim",
        "4",
        "--a",
        "1",
        "--q",
        "2.5",
        "--lambda-range",
        "0:2.5:0.1",
        "--mu-range",
        "0:1:0.1",
        "--mu1-lower",
        "0",
        "--mu1-upper",
        "1",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.starts_with("N,a,q,lambda,mu,verdict,clause"));
    // 26 lambda values times 11 mu values, plus the header.
    assert_eq!(text.lines().count(), 287);
}
