//! The `kontext` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn kontext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kontext")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_shipped_fixtures() {
    for f in ["u4.json", "h6.json", "u9.json"] {
        let o = kontext(&["validate", &fixture(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert_eq!(stdout(&o), "OK\n");
    }
}

#[test]
fn validate_reports_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"space":{"points":[{"id":"w1","weight":"1/2"},{"id":"w2","weight":"0.4"}]},
            "variables":{"a":{"w1":1,"w2":2},"b":{"w1":1,"w2":3}},
            "contexts":{"C":["w1","w9"]}}"#,
    )
    .unwrap();
    let o = kontext(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("total mass 9/10"), "{out}");
    assert!(out.contains("w9"), "{out}");

    std::fs::write(&path, "{\"space\":\n  [").unwrap();
    let o = kontext(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn random_is_deterministic_and_valid() {
    let first = kontext(&["random", "--points", "8", "--seed", "42"]);
    let second = kontext(&["random", "--points", "8", "--seed", "42"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(first.stdout, kontext(&["random", "--points", "8", "--seed", "43"]).stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = kontext(&["random", "--seed", "42", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
    assert_eq!(stdout(&kontext(&["validate", path.to_str().unwrap()])), "OK\n");
    assert_eq!(kontext(&["analyze", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn infeasible_shape_is_a_precondition_failure() {
    assert_eq!(kontext(&["random", "--points", "3"]).status.code(), Some(2));
}

#[test]
fn analyze_u4() {
    let o = kontext(&["analyze", &fixture("u4.json"), "--pair", "a,b", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["contexts"][0]["context"], "C1");
    assert_eq!(v["contexts"][0]["lambda"][0]["square"], "1/8");
    assert_eq!(v["contexts"][1]["context"], "Omega");
    assert_eq!(v["contexts"][1]["delta"][0], "0");
    // deterministic
    assert_eq!(o.stdout, kontext(&["analyze", &fixture("u4.json"), "--format", "json"]).stdout);
}

#[test]
fn analyze_float_mode() {
    let o = kontext(&["analyze", &fixture("u4.json"), "--float", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["contexts"][0]["pb"][0].is_number());
}

#[test]
fn analyze_h6_hyperbolic_row() {
    let o = kontext(&["analyze", &fixture("h6.json"), "--context", "C_hyp", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("C_hyp,w1 w5,hyperbolic"), "{row}");
    assert!(row.contains("1.09861228867"), "{row}");
}

#[test]
fn identical_pair_stops_with_code_2() {
    let o = kontext(&["analyze", &fixture("u4.json"), "--pair", "a,a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not incompatible"));
}

#[test]
fn unknown_names_are_model_errors() {
    assert_eq!(kontext(&["analyze", &fixture("u4.json"), "--pair", "a,z"]).status.code(), Some(1));
    assert_eq!(kontext(&["analyze", &fixture("u4.json"), "--context", "nope"]).status.code(), Some(1));
}

#[test]
fn non_representable_context_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    // U9 with a context whose first splitting coefficient has modulus above 1
    let mut model: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("u9.json")).unwrap()).unwrap();
    model["contexts"]["K"] = serde_json::json!(["w1", "w2", "w5", "w6", "w9"]);
    std::fs::write(&path, model.to_string()).unwrap();
    let o = kontext(&["represent", path.to_str().unwrap(), "--context", "K"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn scan_and_represent() {
    let o = kontext(&["scan", &fixture("u4.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumerated"], 15);
    assert_eq!(v["conserved"], true);

    let o = kontext(&["represent", &fixture("u4.json"), "--context", "C1", "--branch", "minus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("branch Minus"));

    let o = kontext(&["represent", &fixture("u9.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "multivalued");
}

#[test]
fn oracle_matches() {
    let o = kontext(&["oracle", &fixture("u4.json"), "--context", "C1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact_agreement"], true);
    assert_eq!(v["oracle"]["lambda_square"][0], "1/8");
    let o = kontext(&["oracle", &fixture("h6.json"), "--context", "C_hyp", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["oracle"]["lambda_square"][0], "25/9");
    assert_eq!(v["exact_agreement"], true);
}
