//! End-to-end tests of the `gsod` binary: exit codes, file artifacts,
//! determinism of the export path.

use assert_cmd::Command;
use predicates::prelude::*;
use std::fs;
use std::path::Path;

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path
}

fn fixture_a(eps: &str) -> String {
    format!(
        r#"{{
  "profile": {{"family": "generic", "h": {{"linear_H": 1.0}}, "ftilde": {{"linear_Ftilde": -2.0}}}},
  "R": 2.0,
  "eps": {eps},
  "n_theta": 10,
  "n_rho": 16,
  "grid": {{"n_r": 33, "n_z": 33, "margin": 0.25}},
  "vtk": 8
}}"#
    )
}

fn fixture_b() -> String {
    r#"{
  "profile": {"family": "degenerate", "h": {"linear_H": 1.0}, "ftilde": {"quadratic_Ftilde": 1.0}},
  "R": 1.0,
  "eps": 0.01,
  "n_theta": 10,
  "n_rho": 16,
  "grid": {"n_r": 25, "n_z": 25, "margin": 0.25}
}"#
    .to_string()
}

fn gsod() -> Command {
    Command::cargo_bin("gsod").unwrap()
}

#[test]
fn solve_fixture_a_constants_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_a("0.01"));
    gsod()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .assert()
        .success()
        .stdout(predicate::str::contains("F_R     0.3125"))
        .stdout(predicate::str::contains("A0      1.25"));
    assert!(tmp.path().join("solution.json").exists());
    assert!(tmp.path().join("field.csv").exists());
    assert!(tmp.path().join("field.vtk").exists());
}

#[test]
fn inadmissible_radius_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_a("0.01"));
    gsod()
        .args(["solve", "--config"])
        .arg(&cfg)
        .args(["--R", "1.0"])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("inadmissible"));
}

#[test]
fn degenerate_family_solves() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_b());
    gsod()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .assert()
        .success()
        .stdout(predicate::str::contains("family  degenerate"));
}

#[test]
fn validate_rejects_short_eps_list() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &fixture_a("0.01").replace("\"eps\": 0.01", "\"eps_list\": [0.01]"),
    );
    gsod()
        .args(["validate", "--config"])
        .arg(&cfg)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("need >=3 epsilons"));
}

#[test]
fn validate_fast_list_all_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_a("0.01"));
    gsod()
        .args(["validate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .assert()
        .success()
        .stdout(predicate::str::contains("overall: all pass"));
    let card = fs::read_to_string(tmp.path().join("scorecard.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&card).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 8);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn export_reproduces_solve_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_a("0.01"));
    let solve_dir = tmp.path().join("a");
    let export_dir = tmp.path().join("b");
    gsod()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&solve_dir)
        .assert()
        .success();
    gsod()
        .args(["export"])
        .arg(solve_dir.join("solution.json"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&export_dir)
        .assert()
        .success();
    // The export path re-solves from the stored shape with identical
    // arithmetic: files must match byte for byte.
    let a = fs::read(solve_dir.join("field.csv")).unwrap();
    let b = fs::read(export_dir.join("field.csv")).unwrap();
    assert_eq!(a, b);
    // Mask correctness: outside rows carry exactly zero velocity.
    let text = String::from_utf8(b).unwrap();
    let mut outside_rows = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[2] == "0" {
            outside_rows += 1;
            assert_eq!(cols[3].parse::<f64>().unwrap(), 0.0);
            assert_eq!(cols[4].parse::<f64>().unwrap(), 0.0);
            assert_eq!(cols[5].parse::<f64>().unwrap(), 0.0);
        }
    }
    assert!(outside_rows > 0);
    // VTK legacy structured-points golden prefix.
    let vtk = fs::read_to_string(export_dir.join("field.vtk")).unwrap();
    assert!(vtk.starts_with(
        "# vtk DataFile Version 3.0\naxisymmetric euler equilibrium (zero-extended)\nASCII\nDATASET STRUCTURED_POINTS\nDIMENSIONS 8 8 8\n"
    ));
}

#[test]
fn export_missing_solution_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_a("0.01"));
    gsod()
        .args(["export", "nonexistent.json", "--config"])
        .arg(&cfg)
        .assert()
        .code(1);
}

#[test]
fn sweep_writes_hashed_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &fixture_a("0.01").replace("\"eps\": 0.01", "\"eps_list\": [0.04, 0.02, 0.01]"),
    );
    gsod()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .args(["--threads", "2"])
        .assert()
        .success();
    let n = fs::read_dir(tmp.path())
        .unwrap()
        .filter(|e| {
            let name = e.as_ref().unwrap().file_name();
            let name = name.to_string_lossy();
            name.starts_with("solve_") && name.ends_with(".json")
        })
        .count();
    assert_eq!(n, 3);
}

#[test]
fn invalid_log_level_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &fixture_a("0.01"));
    gsod()
        .args(["solve", "--config"])
        .arg(&cfg)
        .env("GSOD_LOG", "verbose")
        .assert()
        .code(1)
        .stderr(predicate::str::contains("GSOD_LOG"));
}
