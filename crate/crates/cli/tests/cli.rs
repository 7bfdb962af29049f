use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(self.stdout.trim()).expect("one JSON value on stdout")
    }

    fn lines(&self) -> Vec<Value> {
        self.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
    }
}

fn zariski(args: &[&str]) -> Run {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_zariski")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, content: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn solve_examples() {
    let d = TempDir::new().unwrap();
    let z12 = write(&d, "z12.json", r#"{"kind": "cyclic", "n": 12}"#);
    let s3 = write(&d, "s3.json", r#"{"kind": "symmetric", "n": 3}"#);
    let z = write(&d, "z.json", r#"{"kind": "abelian", "rank": 1, "invariants": []}"#);

    let r = zariski(&["solve", "--group", &z12, "--eq", "x 3 x = 9"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["solutions"], json!([3, 9]));
    assert_eq!(r.json()["bruteforce_agrees"], json!(true));

    let r = zariski(&["solve", "--group", &s3, "--eq", "x = e"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["solutions"], json!(["e"]));

    let r = zariski(&["solve", "--group", &z, "--eq", "x 0 x = 5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["kind"], json!("empty"));
}

#[test]
fn solve_error_codes() {
    let d = TempDir::new().unwrap();
    let z12 = write(&d, "z12.json", r#"{"kind": "cyclic", "n": 12}"#);
    let r = zariski(&["solve", "--group", &z12, "--eq", "x x = 9"]);
    assert_eq!(r.code, 2);
    assert!(r.json()["position"].is_u64());

    let bad = write(&d, "bad.json", r#"{"kind": "abelian", "rank": 0, "invariants": [4, 6]}"#);
    assert_eq!(zariski(&["solve", "--group", &bad, "--eq", "x = 1"]).code, 3);
    let missing = path(&d, "missing.json");
    assert_eq!(zariski(&["solve", "--group", &missing, "--eq", "x = 1"]).code, 3);
    assert_eq!(zariski(&["solve", "--group", &z12, "--eq", "x = 99x"]).code, 3);
}

#[test]
fn closure_examples() {
    let d = TempDir::new().unwrap();
    let z12 = write(&d, "z12.json", r#"{"kind": "cyclic", "n": 12}"#);
    let z8 = write(&d, "z8.json", r#"{"kind": "cyclic", "n": 8}"#);

    let pts = write(&d, "pts.json", r#"{"points": ["3", "9"]}"#);
    let r = zariski(&["closure", "--group", &z12, "--expr", &pts]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["elements"], json!([3, 9]));

    // 2x = 0 ∪ 4x = 0 is G[4].
    let u = write(
        &d,
        "u.json",
        r#"{"op": "union", "children": [{"atom": "x 0 x = 0"}, {"atom": "x 0 x 0 x 0 x = 0"}]}"#,
    );
    let r = zariski(&["closure", "--group", &z8, "--expr", &u, "--query", "4", "--query", "3"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["canonical"]["cosets"], json!([{"kernel": 4, "representative": 0}]));
    assert_eq!(v["queries"], json!({"4": true, "3": false}));

    let empty = write(&d, "empty.json", "");
    assert_eq!(zariski(&["closure", "--group", &z8, "--expr", &empty]).code, 2);
    let unknown = write(&d, "unknown.json", r#"{"atom": "x = q"}"#);
    assert_eq!(zariski(&["closure", "--group", &z8, "--expr", &unknown]).code, 3);
}

#[test]
fn check_examples() {
    let d = TempDir::new().unwrap();
    let q8 = write(&d, "q8.json", r#"{"kind": "quaternion"}"#);
    let d4 = write(&d, "d4.json", r#"{"kind": "dihedral", "n": 4}"#);
    let s3 = write(&d, "s3.json", r#"{"kind": "symmetric", "n": 3}"#);

    let r = zariski(&["check", "super-normal", "--group", &q8, "--subgroup", "center"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["super_normal"], json!(true));

    let r = zariski(&["check", "super-normal", "--group", &d4, "--subgroup", "r"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["witness"]["x"], json!("s"));

    let r = zariski(&["check", "normal", "--group", &d4, "--subgroup", "s"]);
    assert_eq!(r.code, 1);
    assert_eq!(zariski(&["check", "normal", "--group", &d4, "--subgroup", "r"]).code, 0);
    assert_eq!(zariski(&["check", "normal", "--group", &d4, "--subgroup", "nope"]).code, 3);

    let cert = write(
        &d,
        "cert.json",
        r#"{"equations": ["x = (12)", "x = (13)", "x = (23)", "x = (123)", "x = (132)"]}"#,
    );
    let r = zariski(&["check", "cover", "--group", &s3, "--cert", &cert]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let short = write(&d, "short.json", r#"{"equations": ["x = (12)", "x = (13)", "x = (23)", "x = (123)"]}"#);
    let r = zariski(&["check", "cover", "--group", &s3, "--cert", &short]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["counterexample"], json!("(132)"));
}

#[test]
fn reflection_check_on_a_direct_sum() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.json", r#"{"kind": "direct_sum", "factor": {"kind": "cyclic", "n": 4}, "count": 16}"#);
    let a = write(&d, "a.json", r#"{"atom": "x e x = e"}"#);
    let r = zariski(&["check", "reflection", "--group", &g, "--subgroup", "e0,e3", "--expr", &a]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["equal"], json!(true));
    assert_eq!(r.json()["enumeration_agrees"], json!(true));
}

#[test]
fn reflect_examples() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.json", r#"{"kind": "direct_sum", "factor": {"kind": "cyclic", "n": 4}, "count": 16}"#);
    let a = write(&d, "a.json", r#"{"atom": "x e x = e"}"#);
    let full = write(&d, "full.json", r#""full""#);
    let out = path(&d, "trace.jsonl");

    let r = zariski(&["reflect", "--group", &g, "--expr", &a, "--seed", "e0", "--out", &out]);
    assert_eq!(r.code, 0);
    let summary = r.json();
    assert_eq!(summary["stabilized"], json!(true));
    assert_eq!(summary["equality"]["equal"], json!(true));
    let trace: Vec<Value> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(trace.len() >= 2);
    assert!(trace[..trace.len() - 1].iter().all(|l| l["trigger"].is_string()));

    let r = zariski(&["reflect", "--group", &g, "--expr", &full, "--seed", "e0"]);
    assert_eq!(r.code, 0);
    let lines = r.lines();
    assert!(lines.iter().all(|l| l["trigger"] != json!("psi") && l["trigger"] != json!("phi_k")));

    let r = zariski(&["reflect", "--group", &g, "--expr", &a, "--seed", "e0,e1,e2,e3,e4", "--fuel", "1"]);
    assert_eq!(r.code, 4);
    let lines = r.lines();
    assert_eq!(lines.last().unwrap()["stabilized"], json!(false));
    assert_eq!(lines.last().unwrap()["equality"]["informational"], json!(true));

    assert_eq!(zariski(&["reflect", "--group", &g, "--expr", &a, "--seed", "e0", "--fuel", "0"]).code, 3);
}

#[test]
fn reflect_on_an_unbounded_sum_truncates() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "g.json", r#"{"kind": "direct_sum", "factor": {"kind": "cyclic", "n": 2}, "index": "naturals"}"#);
    let a = write(&d, "a.json", r#"{"points": ["e", "e5"]}"#);
    let out = path(&d, "t.jsonl");
    let r = zariski(&["reflect", "--group", &g, "--expr", &a, "--seed", "e2", "--out", &out]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["truncated_to"], json!(6));
}

#[test]
fn cover_search_examples() {
    let d = TempDir::new().unwrap();
    let z2 = write(&d, "z2.json", r#"{"kind": "cyclic", "n": 2}"#);
    let s3 = write(&d, "s3.json", r#"{"kind": "symmetric", "n": 3}"#);

    let r = zariski(&["cover-search", "--group", &z2]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["size"], json!(1));

    let out = path(&d, "cert.json");
    let r = zariski(&["cover-search", "--group", &s3, "--max-n", "1", "--out", &out]);
    assert_eq!(r.code, 0);
    assert!(r.json()["size"].as_u64().unwrap() <= 5);
    assert_eq!(r.json()["verified"], json!(true));
    // The written certificate goes back through the checker.
    assert_eq!(zariski(&["check", "cover", "--group", &s3, "--cert", &out]).code, 0);

    assert_eq!(zariski(&["cover-search", "--group", &s3, "--budget", "0"]).code, 4);
}

#[test]
fn reports_are_deterministic() {
    let d = TempDir::new().unwrap();
    let s4 = write(&d, "s4.json", r#"{"kind": "symmetric", "n": 4}"#);
    let a = zariski(&["cover-search", "--group", &s4, "--max-n", "1"]);
    let b = zariski(&["cover-search", "--group", &s4, "--max-n", "1"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}
