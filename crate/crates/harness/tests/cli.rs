//! End-to-end CLI tests: exit codes, output files, determinism.

use std::path::Path;
use std::process::Command;

fn fnls() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fnls"))
}

fn config_path(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn budget_subcommand_reproduces_reference_numbers() {
    let out = tempfile::tempdir().unwrap();
    let status = fnls()
        .args([
            "budget",
            "--config",
            &config_path("budget_d5.toml"),
            "--out",
            out.path().to_str().unwrap(),
            "--quiet",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["results"]["min_n"], 1024.0);
    assert_eq!(report["results"]["decay_exponent"], "19/90");
    assert_eq!(report["results"]["alpha"], "18/95");
    assert_eq!(report["results"]["gamma_threshold"], "8/5");
    assert!(out.path().join("series.csv").exists());
}

#[test]
fn run_subcommand_writes_documented_series() {
    let out = tempfile::tempdir().unwrap();
    let status = fnls()
        .args([
            "run",
            "--config",
            &config_path("run_small.toml"),
            "--out",
            out.path().to_str().unwrap(),
            "--quiet",
            "--threads",
            "2",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("report.json")).unwrap())
            .unwrap();
    let csv = std::fs::read_to_string(out.path().join("series.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    // every CSV column is described in the schema section
    let schema = report["schema"].as_array().unwrap();
    let documented: Vec<&str> = schema
        .iter()
        .map(|c| c["column"].as_str().unwrap())
        .collect();
    assert_eq!(header.split(',').collect::<Vec<_>>(), documented);
    assert_eq!(csv.lines().count(), 1 + 11); // header + samples
}

#[test]
fn invalid_config_exits_2_with_named_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        r#"
kind = "almost"
[grid]
dimension = 5
points_per_axis = 16
[solver]
dt = 1e-3
steps = 100
sample_stride = 10
[imethod]
gamma = 1.8
delta = 0.1
n_values = [32.0]
[data]
family = "band_limited_random"
band = 2.0
amplitude = 1.0
"#,
    )
    .unwrap();
    let output = fnls()
        .args([
            "almost",
            "--config",
            bad.to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
            "--quiet",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unresolved"), "{stderr}");
    assert!(stderr.contains("seed"), "{stderr}");
}

#[test]
fn missing_config_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let status = fnls()
        .args([
            "run",
            "--config",
            dir.path().join("nope.toml").to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
            "--quiet",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));
}

#[test]
fn check_subcommand_passes_and_tabulates() {
    let out = tempfile::tempdir().unwrap();
    let output = fnls()
        .args([
            "check",
            "--config",
            &config_path("check.toml"),
            "--out",
            out.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("PASS"));
    let csv = std::fs::read_to_string(out.path().join("series.csv")).unwrap();
    assert!(csv.starts_with("check,passed,detail"));
    assert!(csv.contains("budget_worked_example,true"));
}

fn run_to(dir: &Path, config: &str, sub: &str) -> Vec<u8> {
    let status = fnls()
        .args([
            sub,
            "--config",
            &config_path(config),
            "--out",
            dir.to_str().unwrap(),
            "--quiet",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    std::fs::read(dir.join("series.csv")).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run_to(a.path(), "run_small.toml", "run");
    let second = run_to(b.path(), "run_small.toml", "run");
    assert_eq!(first, second);
}
