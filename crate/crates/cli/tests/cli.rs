use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn comblab(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_comblab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gen_then_overlay_and_arrange() {
    let dir = tempfile::tempdir().unwrap();
    let seg = path(dir.path(), "inst.seg");
    let out = comblab(&["gen", "--scenario", r#"{"kind":"grid","h":4,"v":4,"marks":2}"#, "--seed", "3", "--out", &seg], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["segments"], 8);
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("inst.json")).unwrap()).unwrap();
    assert_eq!(side["schema"], 1);
    assert_eq!(side["collections"].as_array().unwrap().len(), 2);

    let out = comblab(&["overlay", &path(dir.path(), "inst.json")], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["marked"]["union_total"], 16);

    let out = comblab(&["arrange", &seg], None);
    assert_eq!(json(&out)["faces"], 10);
}

#[test]
fn face_reports_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let seg = path(dir.path(), "plus.seg");
    fs::write(&seg, "-1 0 1 0\n0 -1 0 1\n").unwrap();
    let out = comblab(&["face", &seg, "--at", "5", "5"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["components"][0]["linearized"], "0+ 1+:2 1- 0+ 0- 1- 1+:1 0-");
    assert_eq!(v["components"][0]["ds3"], true);
    let out = comblab(&["face", &seg, "--at", "0", "0"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ds_from_stdin() {
    let out = comblab(&["ds", "--order", "2"], Some("a b a b"));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["violation"]["positions"], serde_json::json!([0, 1, 2, 3]));
    let out = comblab(&["ds", "--lambda", "3"], Some("a b a"));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["lambda"], 8);
    assert_eq!(v["profile"], serde_json::json!([1, 1, 0]));
    assert_eq!(comblab(&["ds", "--order", "0"], Some("a")).status.code(), Some(2));
}

#[test]
fn plan_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let robot = path(dir.path(), "robot.seg");
    fs::write(&robot, "0 0 2 0\n2 0 2 2\n2 2 0 2\n0 2 0 0\n").unwrap();
    let pin = path(dir.path(), "pin.txt");
    fs::write(&pin, "0 0\n").unwrap();
    let svg = path(dir.path(), "plan.svg");
    let out = comblab(&["plan", "--robot", &robot, "--pins", &pin, "--from", "5", "5", "--to", "-5", "-5", "--svg", &svg], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"]["verdict"], "path");
    assert!(fs::read_to_string(&svg).unwrap().contains("<polyline"));

    let mut fence = String::new();
    for i in -5..=5 {
        fence.push_str(&format!("{i} -5\n{i} 5\n-5 {i}\n5 {i}\n"));
    }
    let fence_file = path(dir.path(), "fence.txt");
    fs::write(&fence_file, fence).unwrap();
    let out = comblab(&["plan", "--robot", &robot, "--pins", &fence_file, "--from", "0", "0", "--to", "20", "20"], None);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["outcome"]["verdict"], "unreachable");

    let out = comblab(&["plan", "--robot", &robot, "--pins", &pin, "--from", "-1", "-1", "--to", "5", "5"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    for out in [&a, &b] {
        let r = comblab(&["bench", "--suite", "quick", "--trials", "1", "--seed", "5", "--out", out], None);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["schema"], 1);
    let seq = path(dir.path(), "c.json");
    comblab(&["--sequential", "bench", "--suite", "quick", "--trials", "1", "--seed", "5", "--out", &seq], None);
    assert_eq!(fs::read(&seq).unwrap(), ta);
    assert_eq!(comblab(&["bench", "--suite", "nope"], None).status.code(), Some(2));
}

#[test]
fn render_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let seg = path(dir.path(), "sq.seg");
    fs::write(&seg, "0 0 2 0\n2 0 2 2\n2 2 0 2\n0 2 0 0\n").unwrap();
    let svg = path(dir.path(), "sq.svg");
    let out = comblab(&["render", &seg, "--at", "1", "1", "--out", &svg], None);
    assert!(out.status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<line").count(), 4);
    assert_eq!(text.matches("<polygon").count(), 1);

    fs::write(&seg, "0 0 1\n").unwrap();
    assert_eq!(comblab(&["arrange", &seg], None).status.code(), Some(2));
    assert_eq!(comblab(&["arrange", "/does/not/exist"], None).status.code(), Some(2));
}
