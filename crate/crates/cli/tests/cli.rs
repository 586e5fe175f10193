use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn mgp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgp")).args(args).output().expect("mgp runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn validate_triangular_exits_zero() {
    let o = mgp(&["validate", &fixture("triangular_ka2.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simple_top_fails_at_second_iso_clause() {
    let o = mgp(&["check-gp", &fixture("triangular_ka2.json"), "--quadruple", "S2", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["result"]["clause"], "iso_b2");
    assert_eq!(v["witness"]["kind"], "non_injective_map");
    assert_eq!(v["witness"]["clause"], "iso_b2");
}

#[test]
fn projectives_pass() {
    for q in ["P1", "P2"] {
        let o = mgp(&["check-gp", &fixture("triangular_ka2.json"), "--quadruple", q]);
        assert_eq!(o.status.code(), Some(0), "{q}");
    }
}

#[test]
fn dual_numbers_simple_has_short_period() {
    let o = mgp(&["certify-gp", &fixture("dual_numbers.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    let p = v["result"]["period"].as_u64().expect("period");
    assert!((1..=2).contains(&p));
}

#[test]
fn two_cycle_exit_codes() {
    let p = fixture("two_cycle.json");
    assert_eq!(mgp(&["check-gp", &p]).status.code(), Some(1));
    assert_eq!(mgp(&["certify-gp", &p]).status.code(), Some(0));
    assert_eq!(mgp(&["check-compat", &p]).status.code(), Some(1));
    let o = mgp(&["audit", &p, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["result"]["counts"]["expected-divergence"], 2);
}

#[test]
fn nc_tensor_actions() {
    let p = fixture("nc_five.json");
    let o = mgp(&["nc-tensor", "build", &p, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(mgp(&["nc-tensor", "iso", &p]).status.code(), Some(0));
    assert_eq!(mgp(&["nc-tensor", "check", &p]).status.code(), Some(0));
    assert_eq!(mgp(&["nc-tensor", "check", &p, "--module", "S1"]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_three_with_location() {
    let o = mgp(&["check-gp", &fixture("triangular_ka2.json"), "--quadruple", "nope"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = mgp(&["validate", bad.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_of(&o)["status"], "input-error");

    assert_eq!(mgp(&["validate"]).status.code(), Some(3));
    assert_eq!(mgp(&["validate", "/nonexistent/problem.json"]).status.code(), Some(3));
}

#[test]
fn invalid_algebra_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad_alg.json");
    // Unit claims e_0 but e_1 e_1 = e_0 breaks the unit law.
    let text = r#"{
        "schema": "morita-gp/problem/v1",
        "field": "Q",
        "algebras": { "A": { "kind": "table", "dim": 2, "unit": [1, 0], "constants": [[1, 1, 0, 1]] } }
    }"#;
    std::fs::write(&p, text).unwrap();
    assert_eq!(mgp(&["validate", p.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let p = fixture("psi_example.json");
    let a = mgp(&["audit", &p, "--json", "--seed", "11"]);
    let b = mgp(&["audit", &p, "--json", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn saved_reports_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let problem = fixture("triangular_ka2.json");
    let o = mgp(&["check-gp", &problem, "--quadruple", "S2", "--json"]);
    let rp = dir.path().join("report.json");
    std::fs::write(&rp, &o.stdout).unwrap();
    let v = mgp(&["verify-report", &problem, rp.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stdout));

    let mut report = json_of(&o);
    let kv = report["witness"]["kernel_vector"].as_array_mut().unwrap();
    for s in kv.iter_mut() {
        *s = Value::String("0".into());
    }
    let tp = dir.path().join("tampered.json");
    std::fs::write(&tp, serde_json::to_string_pretty(&report).unwrap()).unwrap();
    assert_eq!(mgp(&["verify-report", &problem, tp.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn certificate_and_resolution_reports_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (problem, args) in [
        (fixture("dual_numbers.json"), vec!["certify-gp"]),
        (fixture("triangular_ka2.json"), vec!["build-resolution", "--window", "3"]),
    ] {
        let mut full = args.clone();
        full.push(&problem);
        full.push("--json");
        let o = mgp(&full);
        let rp = dir.path().join("r.json");
        std::fs::write(&rp, &o.stdout).unwrap();
        let v = mgp(&["verify-report", &problem, rp.to_str().unwrap(), "--json"]);
        assert_eq!(v.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&v.stdout));
        let checks = json_of(&v)["result"]["checks"].as_array().unwrap().len();
        assert!(checks >= 4);
    }
}
