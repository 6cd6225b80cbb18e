use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn divpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divpoly")).args(args).output().expect("binary runs")
}

fn divpoly_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_divpoly"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn corpus_file(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn is_pq(s: &str) -> bool {
    let Some((p, q)) = s.split_once('/') else { return false };
    let (Ok(p), Ok(q)) = (p.parse::<i64>(), q.parse::<i64>()) else { return false };
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    q > 0 && gcd(p, q) == 1
}

#[test]
fn facets_t9_json_has_expected_right_hand_sides() {
    let doc = json(&divpoly(&["facets", &corpus_file("T9.nwk"), "--format", "json"]));
    assert_eq!(doc["dimension"], 3);
    let facets = doc["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 12);
    let rhs: Vec<&str> = facets
        .iter()
        .filter(|f| f["kind"] == "allocation")
        .map(|f| f["rhs"].as_str().unwrap())
        .collect();
    assert_eq!(rhs, vec!["14/1", "10/1", "2/1"]);
    for f in facets {
        assert!(is_pq(f["rhs"].as_str().unwrap()));
        for c in f["coeffs"].as_array().unwrap() {
            assert!(is_pq(c.as_str().unwrap()), "{c}");
        }
    }
    for v in doc["vertices"].as_array().unwrap() {
        for s in v["scores"].as_array().unwrap() {
            assert!(is_pq(s.as_str().unwrap()));
        }
    }
}

#[test]
fn analyze_t6_reports_two_degrees_of_freedom() {
    let out = divpoly(&["analyze", &corpus_file("T6.nwk")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("d = 2"), "{text}");
    let doc = json(&divpoly(&["analyze", "T6", "--format", "json"]));
    assert_eq!(doc["dimension"], 2);
}

#[test]
fn verify_sweep_exits_zero() {
    let out = divpoly(&["verify", "--max-leaves", "7", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn output_is_deterministic() {
    let a = divpoly(&["facets", "FIG2", "--format", "json", "--rejected"]);
    let b = divpoly(&["facets", "FIG2", "--format", "json", "--rejected"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stdin_and_inline_newick_match_files() {
    let nwk = std::fs::read_to_string(corpus_file("T9.nwk")).unwrap();
    let from_file = divpoly(&["vertices", &corpus_file("T9.nwk"), "--format", "json"]);
    let from_stdin = divpoly_stdin(&["vertices", "-", "--format", "json"], &nwk);
    let inline = divpoly(&["vertices", nwk.trim(), "--format", "json"]);
    assert_eq!(from_file.stdout, from_stdin.stdout);
    assert_eq!(from_file.stdout, inline.stdout);
    assert_eq!(json(&from_file)["vertices"].as_array().unwrap().len(), 8);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(divpoly(&["facets", "/no/such/file.nwk"]).status.code(), Some(2));
    assert_eq!(divpoly(&["facets", "((a:1,b:1);"]).status.code(), Some(2));
    assert_eq!(divpoly(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("obj.txt");
    std::fs::write(&obj, "1 2 x").unwrap();
    assert_eq!(divpoly(&["optimize", "T9", "--objective", obj.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn oracle_guard_honours_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_divpoly"))
        .args(["verify", "T9"])
        .env("DIVPOLY_MAX_LEAVES", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DIVPOLY_MAX_LEAVES"));
    let out = Command::new(env!("CARGO_BIN_EXE_divpoly")).args(["verify", "T9"]).env_remove("DIVPOLY_MAX_LEAVES").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn optimize_total_length() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("obj.json");
    std::fs::write(&obj, r#"{"x8": "1"}"#).unwrap();
    let doc = json(&divpoly(&["optimize", "T9", "--objective", obj.to_str().unwrap(), "--format", "json"]));
    assert_eq!(doc["value"], "2/1");
    assert_eq!(doc["certified"], true);
}

#[test]
fn index_commands() {
    let doc = json(&divpoly(&["index", "fp", "T9", "--format", "json"]));
    assert_eq!(doc["inside"], true);
    assert_eq!(doc["total"], "16/1");
    let out = divpoly_stdin(&["index", "eval", "T6", "--beta", "-", "--format", "json"], "[\"1\", \"0\"]");
    let doc = json(&out);
    assert_eq!(doc["total"], "10/1");
    assert_eq!(doc["inside"], true);
    let out = divpoly_stdin(&["index", "eval", "T6", "--beta", "-"], "2 0");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn alloc_reports_anchored_values() {
    let doc = json(&divpoly(&["alloc", "T9", "--set", "x1,x4,x8", "--format", "json"]));
    assert_eq!(doc["value"], "3/1");
    let doc = json(&divpoly(&["alloc", "FIG2", "--set", "x1,x2,x5,x6,x7", "--anchor", "x1", "--format", "json"]));
    assert_eq!(doc["value"], "4/1");
    assert!(!doc["trace"].as_array().unwrap().is_empty());
}

#[test]
fn projection_of_t9() {
    let doc = json(&divpoly(&["project", "T9", "--taxa", "x1,x4,x8", "--format", "json"]));
    assert_eq!(doc["facet_count"], 6);
    assert_eq!(doc["allocation_bounds_hold"], true);
}

#[test]
fn bundled_corpus_manifest_holds() {
    let out = divpoly(&["corpus", "check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let dir = format!("{}/../../corpus", env!("CARGO_MANIFEST_DIR"));
    let out = divpoly(&["corpus", "check", "--dir", &dir]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn broken_manifest_assertion_fails_loudly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus_file("T9.nwk"), dir.path().join("T9.nwk")).unwrap();
    std::fs::write(
        dir.path().join("manifest.json"),
        r#"{"trees":[{"name":"T9","file":"T9.nwk","assert":{"dimension":4}}]}"#,
    )
    .unwrap();
    let out = divpoly(&["corpus", "check", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dimension: expected 4, got 3"));
    std::fs::write(dir.path().join("manifest.json"), r#"{"trees":[{"name":"T9","file":"T9.nwk","assert":{"bogus":1}}]}"#)
        .unwrap();
    assert_eq!(divpoly(&["corpus", "check", "--dir", dir.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn corpus_generate_lists_shapes() {
    let out = divpoly(&["corpus", "generate", "--max-leaves", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 1 + 2 + 3);
}
