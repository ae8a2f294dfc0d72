//! End-to-end tests of the `heatbench` binary: flag handling, exit codes,
//! and report shapes on small problem instances.

use std::process::{Command, Output};

fn heatbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn markdown_report_for_all_variants() {
    let out = heatbench(&[
        "--h",
        "6",
        "--t",
        "4",
        "--runs",
        "2",
        "--workers",
        "2",
        "--format",
        "markdown",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("| 6 | seq |"), "{text}");
    assert!(text.contains("| 6 | wavefront |"));
    assert!(text.contains("| 6 | dataparallel |"));
    assert!(text.contains("## Relative efficiency"));
    assert!(text.contains("- grid: 6 x 12, time steps: 4"));
}

#[test]
fn json_report_is_parseable_and_carries_config() {
    let out = heatbench(&[
        "--h",
        "5",
        "--runs",
        "1",
        "--variant",
        "seq",
        "--format",
        "json",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["meta"]["h"], 5);
    assert_eq!(v["meta"]["w"], 10, "width defaults to 2*H");
    assert_eq!(v["meta"]["t_max"], 10, "time steps default to 2*H");
    assert_eq!(v["meta"]["seed"], 7);
    assert_eq!(v["meta"]["warmup"], true);
    assert!(v["meta"]["hardware_threads"].as_u64().unwrap() >= 1);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["variant"], "seq");
    assert_eq!(rows[0]["runs"], 1);
    assert!(v["efficiency"].as_array().unwrap().is_empty());
}

#[test]
fn csv_report_has_metadata_header() {
    let out = heatbench(&[
        "--h",
        "5",
        "--t",
        "2",
        "--runs",
        "1",
        "--workers",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(
        header.starts_with("# h=5 w=10 t_max=2 workers=1 runs=1 seed=42 warmup=true"),
        "{header}"
    );
    assert_eq!(lines.next().unwrap(), "h,variant,reported,min,max,runs");
    assert_eq!(text.lines().filter(|l| l.starts_with("5,")).count(), 3);
}

#[test]
fn verify_passes_and_reports_diagnostics() {
    let out = heatbench(&["--h", "5", "--t", "3", "--runs", "1", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let diag = stderr(&out);
    assert!(diag.contains("verify: seq vs wavefront: ok"), "{diag}");
    assert!(diag.contains("verify: seq vs dataparallel: ok"));
    assert!(diag.contains("verify: wavefront vs dataparallel: ok"));
    assert!(diag.contains("resends 0: ok"));
}

#[test]
fn missing_height_is_a_usage_error() {
    let out = heatbench(&["--runs", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn undersized_grid_is_a_usage_error() {
    let out = heatbench(&["--h", "2", "--runs", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("height"));
}

#[test]
fn unknown_variant_is_a_usage_error() {
    let out = heatbench(&["--h", "6", "--variant", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_format_is_a_usage_error() {
    let out = heatbench(&["--h", "6", "--format", "yaml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_with_one_variant_is_a_usage_error() {
    let out = heatbench(&["--h", "6", "--variant", "seq", "--verify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least two variants"));
}

#[test]
fn zero_runs_is_a_usage_error() {
    let out = heatbench(&["--h", "6", "--runs", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
