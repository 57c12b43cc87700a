use std::path::Path;
use std::process::{Command, Output};

use flatgap::harness::sha256_hex;
use serde_json::Value;

fn flatgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatgap")).args(args).env_remove("FLATGAP_CACHE_DIR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn stdout_mode_prints_the_artifact_and_the_manifest_on_stderr() {
    let o = flatgap(&["enumerate", "torus", "--radius", "2.5", "--no-witnesses"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().count(), 17, "header plus 16 vectors:\n{csv}");
    let manifest: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(manifest["tool"], "flatgap");
    assert_eq!(manifest["command"], "enumerate");
    assert_eq!(manifest["outputs"]["holonomies.csv"], sha256_hex(csv.as_bytes()));
}

#[test]
fn out_directory_holds_artifacts_hashed_by_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gaps");
    let o = flatgap(&[
        "gaps", "octagon", "--r-min", "2", "--r-max", "20", "--samples", "8", "--histogram-bins", "10", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let outputs = manifest["outputs"].as_object().unwrap();
    assert!(outputs.contains_key("trajectory.csv") && outputs.contains_key("gap_histogram.csv"));
    for (name, hash) in outputs {
        let bytes = std::fs::read(out.join(name)).unwrap();
        assert_eq!(hash.as_str().unwrap(), sha256_hex(&bytes), "{name}");
    }
    let trajectory = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(trajectory.starts_with("R,count,zeta,scaled,running_min\n"));
    assert_eq!(trajectory.lines().count(), 9);
}

#[test]
fn exit_codes_separate_input_budget_and_success() {
    assert_eq!(code(&flatgap(&["build", "no_such_surface"])), 2);
    assert_eq!(code(&flatgap(&["enumerate", "torus", "--radius", "-1"])), 2);
    assert_eq!(code(&flatgap(&["gaps", "torus", "--psi", "1/"])), 2);
    assert_eq!(code(&flatgap(&["enumerate", "octagon", "--radius", "50", "--budget", "100"])), 3);
    assert_eq!(code(&flatgap(&["series", "--psi", "1", "--psi0"])), 2);
    assert_eq!(code(&flatgap(&["build", "golden_l"])), 0);
}

#[test]
fn build_reports_the_surface() {
    let o = flatgap(&["build", "l_2_2", "--canonical"]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["genus"], 2);
    assert!(report["canonical"].is_string());
}

#[test]
fn series_writes_a_verdict_and_breakpoints() {
    let dir = tempfile::tempdir().unwrap();
    let o = flatgap(&["series", "--psi", "sqrt(t)", "--psi0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let verdict: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["verdict"], "Convergent");
    assert!(dir.path().join("psi0.csv").exists());
}

fn write_spec(dir: &Path, body: &str) -> String {
    let p = dir.join("spec.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn experiment_specs_are_validated_and_run() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_spec(dir.path(), r#"{"surface": "torus", "grid": {"values": [1, 2]}, "colour": "red"}"#);
    assert_eq!(code(&flatgap(&["experiment", &bad])), 2);
    let bad_grid = write_spec(dir.path(), r#"{"surface": "torus", "grid": {"values": [2, 1]}}"#);
    assert_eq!(code(&flatgap(&["experiment", &bad_grid])), 2);

    let good = write_spec(
        dir.path(),
        r#"{"surface": "l_2_2", "grid": {"r_min": 1, "r_max": 12, "samples": 6},
            "targets": {"b": 2, "c": 0, "sigma": 0.5, "k_min": 0, "k_max": 3}, "ensemble": 8, "seed": 1}"#,
    );
    let out = dir.path().join("run");
    let o = flatgap(&["experiment", &good, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["trajectory.csv", "sweep.csv", "summary.json", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 1);
}

#[test]
fn selftest_passes() {
    let o = flatgap(&["selftest"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(!text.is_empty() && text.lines().all(|l| l.starts_with("PASS")), "{text}");
}
