use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rectdec"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin piped");
        if let Some(text) = stdin {
            match pipe.write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => panic!("write stdin: {e}"),
                _ => {}
            }
        }
    }
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("rectdec-cli-{}-{name}", std::process::id()))
}

#[test]
fn psi_is_not_interval_decomposable() {
    let gen = run(&["gen", "psi", "--m", "2"], None);
    assert_eq!(gen.status.code(), Some(0));
    let doc = json(&gen);
    assert_eq!(doc["dims"], serde_json::json!([[0, 0, 1], [0, 1, 2], [1, 2, 2]]));
    let oracle = run(&["oracle"], Some(&stdout(&gen)));
    assert_eq!(oracle.status.code(), Some(1));
    assert_eq!(json(&oracle)["message"], "NOT interval-decomposable");
}

#[test]
fn hook_fails_weak_check_with_witness() {
    let gen = run(&["gen", "hook"], None);
    let doc = json(&gen);
    assert_eq!(doc["dims"], serde_json::json!([[0, 1, 1], [1, 2, 1]]));
    let check = run(&["check", "--weak"], Some(&stdout(&gen)));
    assert_eq!(check.status.code(), Some(1));
    let v = json(&check);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["witness"]["condition"], "image");
    let local = run(&["check", "--local", "rectangles_plus_top_hooks"], Some(&stdout(&gen)));
    assert_eq!(local.status.code(), Some(0));
    let local = run(&["check", "--local", "rectangles"], Some(&stdout(&gen)));
    assert_eq!(local.status.code(), Some(1));
}

#[test]
fn rect_sum_round_trips_through_decompose() {
    let out = scratch("rs.json");
    let out_s = out.to_str().unwrap();
    let gen = run(
        &["gen", "rect-sum", "--shape", "4x4", "--count", "5", "--seed", "7", "--p", "5", "--out", out_s],
        None,
    );
    assert_eq!(gen.status.code(), Some(0));
    let truth: Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out_s}.truth.json")).unwrap()).unwrap();
    let mut expected: Vec<String> = truth["rectangles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    expected.sort();

    let weak = run(&["check", "--weak", "--in", out_s], None);
    assert_eq!(weak.status.code(), Some(0));
    let dec = run(&["decompose", "--certify", "--in", out_s], None);
    assert_eq!(dec.status.code(), Some(0));
    let doc = json(&dec);
    assert!(doc["iso"].is_array());
    let mut got = Vec::new();
    for s in doc["summands"].as_array().unwrap() {
        for _ in 0..s["multiplicity"].as_u64().unwrap() {
            got.push(s["shape"].as_str().unwrap().to_string());
        }
    }
    got.sort();
    assert_eq!(got, expected);
    let _ = std::fs::remove_file(&out);
    let _ = std::fs::remove_file(format!("{out_s}.truth.json"));
}

#[test]
fn decompose_refuses_non_exact_input() {
    let gen = run(&["gen", "hook"], None);
    let dec = run(&["decompose"], Some(&stdout(&gen)));
    assert_eq!(dec.status.code(), Some(1));
    assert_eq!(json(&dec)["decomposable"], false);
}

#[test]
fn local_rectangles_agrees_with_weak_on_random_modules() {
    for seed in 0..12 {
        let s = seed.to_string();
        let gen = run(&["gen", "random", "--shape", "3x2", "--seed", &s, "--p", "3"], None);
        assert_eq!(gen.status.code(), Some(0));
        let text = stdout(&gen);
        let weak = run(&["check", "--weak"], Some(&text)).status.code();
        let local = run(&["check", "--local", "rectangles"], Some(&text)).status.code();
        assert_eq!(weak, local, "seed {seed}");
    }
}

#[test]
fn generation_is_deterministic() {
    let a = run(&["gen", "random", "--shape", "3x3", "--seed", "5"], None);
    let b = run(&["gen", "random", "--shape", "3x3", "--seed", "5"], None);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn skeleton_of_an_indicator() {
    let gen = run(&["gen", "psi", "--m", "2"], None);
    let sk = run(&["skeleton", "--point", "3,3"], Some(&stdout(&gen)));
    assert_eq!(sk.status.code(), Some(0));
    let doc = json(&sk);
    assert_eq!(doc["point"], serde_json::json!([3, 3]));
    assert!(doc["cols"].as_array().unwrap().contains(&Value::from(3)));
}

#[test]
fn validate_and_input_errors() {
    let gen = run(&["gen", "hook", "--p", "7"], None);
    let ok = run(&["validate"], Some(&stdout(&gen)));
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["p"], 7);

    assert_eq!(run(&["validate"], Some("{\"p\": 2}")).status.code(), Some(2));
    assert_eq!(run(&["validate"], Some("not json")).status.code(), Some(2));
    let bad_map = r#"{"p":2,"nx":2,"ny":1,"dims":[[1,1]],"hmaps":{"1,1":[[1,1]]}}"#;
    assert_eq!(run(&["validate"], Some(bad_map)).status.code(), Some(2));
    assert_eq!(run(&["gen", "random", "--shape", "3x3"], None).status.code(), Some(2));
    assert_eq!(run(&["gen", "psi", "--m", "1"], None).status.code(), Some(2));
    assert_eq!(run(&["gen", "psi", "--p", "4"], None).status.code(), Some(2));
    assert_eq!(run(&["check"], Some(&stdout(&gen))).status.code(), Some(2));
    assert_eq!(run(&["verify", "--seed", "1"], None).status.code(), Some(2));
}

#[test]
fn verify_single_criterion() {
    let v = run(&["verify", "--criterion", "3", "--seed", "1"], None);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    let doc = json(&v);
    assert_eq!(doc["criteria"][0]["index"], 3);
    assert_eq!(doc["passed"], true);
}
