use assert_cmd::Command;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::cargo_bin("nilmetriq").unwrap().args(args).args(["--format", "json"]).output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn classify_examples() {
    let (code, v) = run(&["classify", "h15"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["csla"], true);
    assert_eq!(v["result"]["cslat"], false);

    let (_, v) = run(&["classify", "h1"]);
    assert_eq!(v["result"]["csla"], false);

    let (_, v) = run(&["classify", "all"]);
    assert_eq!(v["result"]["csla_count"], 23);
    assert_eq!(v["result"]["cslat_count"], 20);
    assert_eq!(v["schema"], "nilmetriq/v1");
}

#[test]
fn classify_accepts_tuples() {
    let (code, v) = run(&["classify", "(0,0,0,0,12,13)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["step"], 2);
}

#[test]
fn sweep_tally() {
    let (code, v) = run(&["sweep", "h12", "--zeros", "2", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["tally"], serde_json::json!({"trivial": 8, "Z2": 2}));
}

#[test]
fn symmetry_h9_zero_s2() {
    let (code, v) = run(&["symmetry", "h9", "--zero", "s2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["index"], 1);
    assert_eq!(v["result"]["basis"], serde_json::json!([["0", "0", "0", "1", "0", "0"]]));
    assert_eq!(v["result"]["central"], true);
}

#[test]
fn symmetry_h28_worked_example() {
    let (_, v) = run(&["symmetry", "h28", "--defaults", "trivial", "--set", "s3=1,s7=2"]);
    assert_eq!(v["result"]["index"], 3);
    assert_eq!(v["result"]["A"], serde_json::json!([["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]));
}

#[test]
fn nilsoliton_h28() {
    let (code, v) = run(&["nilsoliton", "h28", "--r", "24"]);
    assert_eq!(code, 0);
    let o = &v["result"]["outcome"];
    assert_eq!(o["status"], "nilsoliton");
    assert_eq!(o["residual"], "0");
    assert_eq!(v["result"]["index_of_symmetry"], 1);

    let (_, v) = run(&["nilsoliton", "h28", "--diag", "1,1,1,1,1,1"]);
    assert_eq!(v["result"]["outcome"]["status"], "not_nilsoliton");

    let (_, v) = run(&["nilsoliton", "h22", "--t", "1"]);
    assert_eq!(v["result"]["outcome"]["status"], "nilsoliton");
}

#[test]
fn ricci_modes() {
    let (code, _) = run(&["ricci", "h9", "--sigma", "1;0,1;0,0,2;0,0,0,1;0,0,0,1,1;0,0,0,0,0,2"]);
    assert_eq!(code, 2);
    let (code, v) = run(&["ricci", "h9", "--sigma", "1;0,1;0,0,2;0,0,0,1;0,0,0,1,1;0,0,0,0,0,2", "--mode", "approximate"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ricci"]["mode"], "approximate");
    let (_, v) = run(&["ricci", "h9", "--diag", "1,1,4,1,2,4"]);
    assert_eq!(v["result"]["ricci"]["operator"][5][5], "3/2");
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["classify", "h99"]).0, 2);
    assert_eq!(run(&["symmetry", "h9", "--set", "s0=-1"]).0, 2);
    assert_eq!(run(&["symmetry", "h9", "--set", "s0=1/0"]).0, 2);
    assert_eq!(run(&["symmetry", "h9", "--set", "s0=x"]).0, 2);
    assert_eq!(run(&["isotropy", "h9", "--zero", "s42"]).0, 2);
    assert_eq!(run(&["sweep", "h12", "--zeros", "40"]).0, 2);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = Command::cargo_bin("nilmetriq").unwrap().args(["isotropy", "h24", "--seed", "3"]).output().unwrap();
    let b = Command::cargo_bin("nilmetriq").unwrap().args(["isotropy", "h24", "--seed", "3"]).output().unwrap();
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn expect_mode() {
    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("golden.json");
    let out = Command::cargo_bin("nilmetriq").unwrap().args(["classify", "h21"]).output().unwrap();
    std::fs::write(&golden, &out.stdout).unwrap();
    let ok = Command::cargo_bin("nilmetriq").unwrap().args(["classify", "h21", "--expect"]).arg(&golden).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::cargo_bin("nilmetriq").unwrap().args(["classify", "h22", "--expect"]).arg(&golden).output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn csv_and_table_output() {
    let out = Command::cargo_bin("nilmetriq").unwrap().args(["classify", "all", "--format", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name,step,csla,cslat,dim_der,diag_dim\n"));
    assert_eq!(text.lines().count(), 35);
    let out = Command::cargo_bin("nilmetriq").unwrap().args(["sigma", "h9", "--format", "table"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("s5")));
}

#[test]
fn catalog_override_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.json");
    std::fs::write(&path, r#"[{"name": "h2", "tuple": "(0,0,0,0,0,12)"}, {"name": "h4", "tuple": "(0,0,0,0,12,14+25)"}]"#).unwrap();
    let out = Command::cargo_bin("nilmetriq")
        .unwrap()
        .env("NILMETRIQ_CATALOG", &path)
        .args(["classify", "all", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["algebras"].as_array().unwrap().len(), 2);

    std::fs::write(&path, "not json").unwrap();
    let out = Command::cargo_bin("nilmetriq").unwrap().env("NILMETRIQ_CATALOG", &path).args(["classify", "h2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_statements() {
    let (code, v) = run(&["verify", "h9-index", "--samples", "25"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pass"], true);
    // The h21 statement has one branch where the stated index is not attained.
    let (code, v) = run(&["verify", "h21-index", "--samples", "25"]);
    assert_eq!(code, 1);
    let failing: Vec<&Value> = v["result"]["branches"].as_array().unwrap().iter().filter(|b| b["pass"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["branch"], "s2=s0=0,s6!=s3*s7/s4,Q!=0");
}

#[test]
fn exceptional_pair() {
    let (code, v) = run(&["exceptional", "h19+", "--r", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["isometry"], true);
    assert_eq!(v["result"]["outside_component_group"], true);
}

#[test]
fn aut_pattern_rows() {
    let (_, v) = run(&["aut", "h28"]);
    assert_eq!(v["result"]["pattern"].as_array().unwrap().len(), 6);
    assert_eq!(v["result"]["der_dim"].as_u64().unwrap() + 10, 21);
}
