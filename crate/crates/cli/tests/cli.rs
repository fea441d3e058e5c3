use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nspoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nspoly"))
        .args(args)
        .env_remove("NSPOLY_CORPUS_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn bell_doc() -> Value {
    json(&nspoly(&["corpus", "bell-qm"]))
}

#[test]
fn validate_accepts_bell_and_rejects_a_signalling_edit() {
    assert_eq!(code(&nspoly(&["validate", "bell-qm"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let mut doc = bell_doc();
    doc["table"]["a,b"] = serde_json::json!({ "00": "1" });
    let path = write_json(dir.path(), "edited.json", &doc);
    let out = nspoly(&["validate", &path]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["holds"], Value::Bool(false));
    assert!(!report["data"]["no_signalling"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = bell_doc();
    doc["table"]["a,b"]["01"] = Value::String("3/0".into());
    let path = write_json(dir.path(), "bad.json", &doc);
    let out = nspoly(&["validate", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    assert_eq!(code(&nspoly(&["validate", "/nonexistent/model.json"])), 2);
    assert_eq!(code(&nspoly(&["no-such-command"])), 2);
}

#[test]
fn classified_bell_vertices() {
    let out = nspoly(&["vertices", "bell-qm", "--classify"]);
    assert_eq!(code(&out), 0);
    let verts = json(&out)["data"]["vertices"].as_array().unwrap().clone();
    assert_eq!(verts.len(), 24);
    let ld = verts.iter().filter(|v| v["class"] == "LD").count();
    let msc = verts.iter().filter(|v| v["class"] == "MSC").count();
    assert_eq!((ld, msc), (16, 8));
}

#[test]
fn decision_commands_use_exit_status() {
    assert_eq!(code(&nspoly(&["local", "bell-qm"])), 1);
    assert_eq!(code(&nspoly(&["local", "uniform:bell-qm"])), 0);
    assert_eq!(code(&nspoly(&["sc", "ks-18"])), 0);
    assert_eq!(code(&nspoly(&["sc", "model-s"])), 0);
    assert_eq!(code(&nspoly(&["minimal", "model-s"])), 0);
    let out = nspoly(&["realizable", "model-s"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["holds"], Value::Bool(false));
    assert_eq!(code(&nspoly(&["realizable", "model-s-bell"])), 1);
}

#[test]
fn dimension_of_bell_polytope() {
    let out = nspoly(&["dim", "bell-qm"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["data"]["dimension"], 8);
}

#[test]
fn bellize_matches_the_corpus_entry() {
    let ours = nspoly(&["bellize", "model-s"]);
    assert_eq!(code(&ours), 0);
    let corpus = nspoly(&["corpus", "model-s-bell"]);
    assert_eq!(ours.stdout, corpus.stdout);
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("lattice.json");
    let out_str = out_path.to_string_lossy().into_owned();
    let a = nspoly(&["lattice", "det:bell-qm:a=0,a'=1,b=0,b'=1"]);
    let b = nspoly(&["lattice", "det:bell-qm:a=0,a'=1,b=0,b'=1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let s = nspoly(&["corpus", "model-s"]);
    std::fs::write(dir.path().join("s.json"), &s.stdout).unwrap();
    let again = nspoly(&["corpus", "model-s", "--out", &out_str]);
    assert_eq!(code(&again), 0);
    assert_eq!(std::fs::read(&out_path).unwrap(), s.stdout);
    let reread = nspoly(&["bellize", &dir.path().join("s.json").to_string_lossy()]);
    assert_eq!(reread.stdout, nspoly(&["corpus", "model-s-bell"]).stdout);
}

#[test]
fn corpus_directory_lookup() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("mine.json"),
        nspoly(&["corpus", "model-s"]).stdout,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nspoly"))
        .args(["sc", "mine"])
        .env("NSPOLY_CORPUS_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = serde_json::json!({
        "kind": "scenario",
        "variables": ["a", "b"],
        "outcomes": ["0", "1"],
        "contexts": [["a", "b"]]
    });
    let path = write_json(dir.path(), "square.json", &scenario);
    let out = nspoly(&["lattice", &path, "--dot"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph support_lattice"));
    assert!(text.contains("->"));
}

#[test]
fn oracle_size_guard() {
    let out = nspoly(&["lattice", "bell-qm", "--oracle", "--oracle-max-cells", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn selftest_passes() {
    let out = nspoly(&["selftest", "--seed", "7", "--cases", "5"]);
    assert_eq!(code(&out), 0);
}
