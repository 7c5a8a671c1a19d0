use std::path::Path;
use std::process::{Command, Output};

fn swk3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swk3")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn json_reports_are_byte_identical() {
    for args in [
        &["periods", "--check", "theta", "--samples", "3", "--format", "json"][..],
        &["lattice", "--case", "D8A7", "--format", "json"],
        &["kummer", "--theta", "0,1,3,7,11,23", "--emit", "verify", "--format", "json"],
    ] {
        let (a, b) = (swk3(args), swk3(args));
        assert!(a.status.success(), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn report_header_and_schema() {
    let o = swk3(&["family", "--model", "X", "--a", "1", "--b", "2", "--c", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["provenance"]["seed"], 7);
    assert_eq!(v["config"]["model"], "X");
    assert_eq!(v["data"]["summary"], "I4* + I8 + 6I1");
    assert!(v["tables"][0]["expected"].is_string());
}

#[test]
fn family_table_layout() {
    let o = swk3(&["family", "--model", "Y", "--a", "1", "--b", "2", "--c", "3", "--report", "table"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Kodaira type"));
    assert!(text.contains("t = inf | 1                | 2      | 3      | 8         | I2*"));
    assert!(text.contains("(printed)"));
}

#[test]
fn config_round_trip_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = swk3(&["kummer", "--theta", "0,1,3,7,11,-5/2", "--emit", "abc", "--format", "json"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    let cfg = write(dir.path(), "cfg.json", &v["config"].to_string());
    let second = swk3(&["--config", &cfg]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn minimal_config_applies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m.json", r#"{"command": "monodromy", "format": "json"}"#);
    let o = swk3(&["--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["precision"], 192);
    assert_eq!(v["passed"], true);
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "u.json", r#"{"command": "monodromy", "precison": 64}"#);
    let o = swk3(&["--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("precison"));
}

#[test]
fn malformed_rational_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.json", r#"{"command": "family", "c": "1/0"}"#);
    let o = swk3(&["--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`c`"), "{}", stderr(&o));
    let o = swk3(&["family", "--a", "1/0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--a"));
}

#[test]
fn exit_status_follows_verdicts() {
    assert_eq!(swk3(&["monodromy", "--verify-all"]).status.code(), Some(0));
    assert_eq!(swk3(&["lattice", "--case", "D16"]).status.code(), Some(0));
    // the Yukawa ratio check disagrees with the stated 1/2
    assert_eq!(swk3(&["periods", "--check", "yukawa", "--samples", "2"]).status.code(), Some(1));
    assert_eq!(swk3(&["kummer", "--theta", "0,1,2"]).status.code(), Some(2));
    assert_eq!(swk3(&["lattice", "--case", "custom"]).status.code(), Some(2));
}

#[test]
fn custom_gram_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let gram = write(dir.path(), "g.json", "[[2, 1], [1, 2]]");
    let out = dir.path().join("report.json");
    let o = swk3(&["lattice", "--case", "custom", "--gram", &gram, "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["data"]["det"], "3");
    assert_eq!(v["data"]["discriminant_divisors"], serde_json::json!(["3"]));
}

#[test]
fn basechange_rejects_sw_model() {
    let o = swk3(&["basechange", "--model", "Ysw"]);
    assert_eq!(o.status.code(), Some(2));
}
