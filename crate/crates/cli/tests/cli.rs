use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lmpbench"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("lmpbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn external_check_reports_closed_pair() {
    let r = tmp("r.json", r#"[["x","x'"],["y","z'"]]"#);
    let o = run(&["--format", "json", "bisim", "external", &fixture("two-chain"), &fixture("three-sink"), "--relation", &r]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["label"], "a");
    assert_eq!(v["witness"]["pair"], serde_json::json!(["x", "x'"]));
    assert_eq!(v["witness"]["sets"], serde_json::json!([[], ["y'"]]));
    assert_eq!(v["witness"]["masses"], serde_json::json!(["0", "1"]));
}

#[test]
fn vee_classes_of_the_fans() {
    let o = run(&["--format", "json", "bisim", "vee", &fixture("fan"), &fixture("fan-loop")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classes"], serde_json::json!([["L.s1", "L.s2", "R.s1'"], ["L.s3", "R.s3'"], ["R.s4'"]]));
}

#[test]
fn game_on_identical_embeds() {
    let o = run(&["game", "solve", &fixture("two-chain"), &fixture("two-chain"), "--start", "x,x"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("duplicator wins"));
    let o = run(&["game", "solve", &fixture("two-chain"), &fixture("three-sink"), "--start", "x,z'"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("spoiler wins"));
}

#[test]
fn game_play_and_replay() {
    let t = std::env::temp_dir().join(format!("lmpbench-transcript-{}.json", std::process::id()));
    let mut child = bin()
        .args(["game", "play", &fixture("two-chain"), &fixture("three-sink"), "--start", "x,z'", "--as", "duplicator", "--transcript"])
        .arg(&t)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"garbage\nx0=y x1=y' k=0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    let text = stdout(&o);
    assert!(text.contains("could not read move"), "{text}");
    assert!(text.contains("Spoiler wins"), "{text}");
    let o = run(&["game", "replay", &fixture("two-chain"), &fixture("three-sink"), t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("spoiler wins"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bisim"]).status.code(), Some(2));
    assert_eq!(run(&["bisim", "external", &fixture("fan"), &fixture("fan-loop"), "--pair", "s1"]).status.code(), Some(2));
    let bad = tmp("bad.json", r#"{"kind":"lmp","labels":["a"],"states":["x"],"kernels":{"a":{"x":{"x":"3/2"}}}}"#);
    assert_eq!(run(&["validate", &bad]).status.code(), Some(3));
    let states: Vec<String> = (0..7).map(|i| format!("\"s{i}\"")).collect();
    let big = tmp("big.json", &format!(r#"{{"kind":"lmp","labels":["a"],"states":[{}],"kernels":{{"a":{{}}}}}}"#, states.join(",")));
    assert_eq!(run(&["bisim", "oplus", &big, &big, "--pair", "s0,s0"]).status.code(), Some(4));
    assert_eq!(run(&["validate", &fixture("fan")]).status.code(), Some(0));
}

#[test]
fn bundled_fixture_names() {
    let o = run(&["validate", "fixture:nd-branch"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid nlmp"));
}

#[test]
fn generation_is_deterministic_and_valid() {
    for kind in ["lmp", "nlmp"] {
        let a = run(&["gen", "random", "--kind", kind, "--seed", "5"]);
        let b = run(&["gen", "random", "--kind", kind, "--seed", "5"]);
        assert_eq!(a.stdout, b.stdout);
        let p = tmp(&format!("gen-{kind}.json"), &stdout(&a));
        assert_eq!(run(&["validate", &p]).status.code(), Some(0));
    }
}

#[test]
fn report_matches_expectations() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    let o = run(&["report", "table", dir.to_str().unwrap(), "--expect", dir.join("expected_table.md").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("n/a — not refutable at finite scale").count(), 13);
    let empty = std::env::temp_dir().join(format!("lmpbench-empty-{}", std::process::id()));
    std::fs::create_dir_all(&empty).unwrap();
    let o = run(&["report", "table", empty.to_str().unwrap()]);
    assert_eq!(stdout(&o).matches("no data").count(), 36);
}

#[test]
fn sum_and_quotient_round_trip() {
    let o = run(&["sum", &fixture("fan"), &fixture("fan-loop")]);
    let sum = tmp("sum.json", &stdout(&o));
    assert_eq!(run(&["validate", &sum]).status.code(), Some(0));
    let o = run(&["--format", "json", "quotient", &sum]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["model"]["states"].as_array().unwrap().len(), 3);
}

#[test]
fn logic_and_checks() {
    let o = run(&["logic", "eval", &fixture("two-chain"), "<a>{>1/2} tt"]);
    assert_eq!(stdout(&o).trim(), "<a>{>1/2} tt: {x}");
    let fam = tmp("fam.json", r#"[["x"]]"#);
    let o = run(&["check", "stable", &fixture("two-chain"), "--family", &fam]);
    assert_eq!(o.status.code(), Some(1));
    let map = tmp("map.json", r#"{"x":"x","y":"y"}"#);
    let tc = fixture("two-chain");
    assert_eq!(run(&["check", "zigzag", &tc, &tc, "--map", &map]).status.code(), Some(0));
    assert_eq!(run(&["check", "vfinal", &tc, &tc, "--map", &map]).status.code(), Some(0));
}

#[test]
fn nlmp_separation_text() {
    let o = run(&["nlmp", "bisim", "ext-state", &fixture("two-chain"), &fixture("three-sink"), "--pair", "x,z'"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("separated under a"));
    let o = run(&["nlmp", "bisim", "int-hit", "fixture:nd-branch"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_reports_exhaustion() {
    let o = run(&["search", "separation", "--notions", "ext,state", "--max-states", "2", "--budget", "5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("exhausted"));
    assert_eq!(run(&["search", "separation", "--notions", "ext"]).status.code(), Some(2));
}
