use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn gkforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkforge")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

const HEISENBERG: &str = r#"{"dim": 3, "products": [{"i": 1, "j": 2, "coeffs": [0, 0, "1/2"]}, {"i": 2, "j": 1, "coeffs": [0, 0, "-1/2"]}]}"#;
const IDENTITY3: &str = r#"{"entries": [1, 0, 0, 1, 0, 1]}"#;
/// e1•e1 = e1, e1•e2 = e1+e2, e1•e3 = e2+e3, e2•e1 = e2, e3•e1 = e3.
const HYPERBOLIC: &str = r#"{"dim": 3, "products": [
    {"i": 1, "j": 1, "coeffs": [1, 0, 0]}, {"i": 1, "j": 2, "coeffs": [0, 1, 1]},
    {"i": 1, "j": 3, "coeffs": [0, 1, 1]}, {"i": 2, "j": 1, "coeffs": [0, 1, 0]},
    {"i": 3, "j": 1, "coeffs": [0, 0, 1]}]}"#;

#[test]
fn heisenberg_with_the_identity_metric_is_infinitely_balanced() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "n5g3.json", HEISENBERG);
    let g = write(dir.path(), "id3.json", IDENTITY3);
    let out = gkforge(&["classify", "--algebra", alg.to_str().unwrap(), "--metric", g.to_str().unwrap(), "--kmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["field"], "rational");
    assert_eq!(report["flags"]["infinitely_balanced"]["holds"], true);
    assert_eq!(report["flags"]["kahler"]["holds"], false);
}

#[test]
fn non_left_symmetric_product_is_an_input_error_naming_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "bad.json", r#"{"dim": 2, "products": [{"i": 1, "j": 2, "coeffs": [1, 0]}, {"i": 2, "j": 2, "coeffs": [1, 0]}]}"#);
    let g = write(dir.path(), "g.json", r#"{"entries": [1, 0, 1]}"#);
    let out = gkforge(&["classify", "--algebra", alg.to_str().unwrap(), "--metric", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not left-symmetric") && err.contains("ass(e"), "{err}");
}

#[test]
fn schema_violations_exit_with_a_field_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "a.json", r#"{"dim": 2, "products": [{"i": 3, "j": 1, "coeffs": [1, 0]}]}"#);
    let g = write(dir.path(), "g.json", r#"{"entries": [1, 0, 1]}"#);
    let out = gkforge(&["classify", "--algebra", alg.to_str().unwrap(), "--metric", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("products[0].i"));
    let out = gkforge(&["tables", "--which", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = gkforge(&["classify", "--algebra", "x", "--metric", "y", "--kmax", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lift_reports_each_level_and_the_recursion_holds() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "hyp.json", HYPERBOLIC);
    let g = write(dir.path(), "m.json", r#"{"entries": [1, 1, 0, 3, 1, 1]}"#);
    let out = gkforge(&["lift", "--algebra", alg.to_str().unwrap(), "--metric", g.to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let levels = report["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let dims: Vec<u64> = levels.iter().map(|l| l["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [6, 12, 24]);
    assert!(levels.iter().all(|l| l["recursion_defect"].is_null()));
    // θ_j = ((2^j − 1)α − ξ) padded; with tr γ* = 3 tr γ no level is balanced.
    assert!(levels.iter().all(|l| l["balanced"] == false));
}

#[test]
fn float_backend_override_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "n5g3.json", HEISENBERG);
    let g = write(dir.path(), "id3.json", IDENTITY3);
    let out = gkforge(&["classify", "--algebra", alg.to_str().unwrap(), "--metric", g.to_str().unwrap(), "--field", "float"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["field"], "float");
    assert_eq!(report["flags"]["infinitely_balanced"]["holds"], true);
}

#[test]
fn chart_checks_pass_and_fail_with_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "radial.json", r#"{"builtin": "exemple", "params": {"n": 2, "c": 1}}"#);
    let out = gkforge(&["chart", "--metric", m.to_str().unwrap(), "--check", "det=1,hessian,trace_gamma", "--samples", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    assert_eq!(report["checks"].as_array().unwrap().len(), 3);
    let bad = write(dir.path(), "bad.json", r#"{"builtin": "pluriclosed_negative"}"#);
    let out = gkforge(&["chart", "--metric", bad.to_str().unwrap(), "--check", "pluriclosed", "--samples", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["checks"][0]["holds"], false);
    let out = gkforge(&["chart", "--metric", m.to_str().unwrap(), "--check", "kahler"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tables_report_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |path: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_gkforge"))
            .args(["tables", "--which", "4,5", "--samples", "3", "--seed", "7", "--out", path.to_str().unwrap()])
            .env("GKFORGE_THREADS", threads)
            .output()
            .unwrap()
    };
    let out = run(&a, "1");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    run(&b, "4");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["tables"], serde_json::json!([4, 5]));
}

#[test]
fn invalid_thread_cap_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_gkforge")).arg("fixtures").env("GKFORGE_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixtures_exit_one_while_a_worked_instance_disagrees() {
    let out = gkforge(&["fixtures"]);
    let report = json(&out);
    assert_eq!(report["command"], "fixtures");
    let failing: Vec<&str> = report["fixtures"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false))
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["lifted_hyperbolic", "lifted_book"]);
    assert_eq!(out.status.code(), Some(1));
}
