use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn homogen(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homogen")).current_dir(dir).args(args).output().expect("spawn homogen")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = homogen(dir, args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(dir: &Path, args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&ok(dir, &full)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn grid(dir: &Path) {
    ok(dir, &["graph", "cayley", "--moduli", "6,6", "--gen", "a=1,0", "--gen", "b=0,1", "-o", "grid.edges", "--order-out", "grid.rank"]);
}

fn cycle(dir: &Path) {
    ok(dir, &["graph", "cayley", "--moduli", "6", "--gen", "a=1", "-o", "c6.edges", "--order-out", "c6.rank"]);
}

#[test]
fn generators_pipe_into_certificate() {
    let dir = TempDir::new().unwrap();
    let built = ok(dir.path(), &["gens", "build", "--g", "3", "--m", "1"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_homogen"))
        .args(["--json", "gens", "certify", "--girth", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(built.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["count"], 2);
}

#[test]
fn schedule_values() {
    let dir = TempDir::new().unwrap();
    let v = json(dir.path(), &["gens", "schedule", "--g", "3", "--m", "1"]);
    assert_eq!(v["h"], serde_json::json!([0, 4, 7, 9]));
}

#[test]
fn grid_homogeneity() {
    let dir = TempDir::new().unwrap();
    grid(dir.path());
    let v = json(dir.path(), &["order", "measure", "--graph", "grid.edges", "--order", "grid.rank", "--r", "1"]);
    assert_eq!(v["vertices"], 36);
    let (num, den) = (v["alpha_num"].as_u64().unwrap(), v["alpha_den"].as_u64().unwrap());
    assert!(9 * num >= 4 * den, "alpha {num}/{den}");
}

#[test]
fn tree_has_infinite_girth() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t.edges", "#ldigraph v=4 L=\"a\",\"b\"\n0 1 \"a\"\n1 2 \"a\"\n1 3 \"b\"\n");
    assert_eq!(ok(dir.path(), &["graph", "girth", "--graph", "t.edges"]).trim(), "infinite");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(homogen(dir.path(), &["graph", "girth", "--graph", "missing.edges"]).status.code(), Some(1));
    assert_eq!(homogen(dir.path(), &["no-such-command"]).status.code(), Some(1));
    assert_eq!(homogen(dir.path(), &["report"]).status.code(), Some(1));
    assert_eq!(homogen(dir.path(), &["--help"]).status.code(), Some(0));

    cycle(dir.path());
    ok(dir.path(), &["sim", "run", "--alg", "po-all", "--graph", "c6.edges", "-o", "all.json"]);
    let o = homogen(dir.path(), &["sim", "verify", "--problem", "independent-set", "--graph", "c6.edges", "--solution", "all.json"]);
    assert_eq!(o.status.code(), Some(2));
    ok(dir.path(), &["sim", "verify", "--problem", "vertex-cover", "--graph", "c6.edges", "--solution", "all.json"]);

    write(dir.path(), "bad.map", "0 0\n1 0\n2 0\n3 0\n4 0\n5 0\n");
    let o = homogen(dir.path(), &["graph", "verify-cover", "--cover", "c6.edges", "--base", "c6.edges", "--map", "bad.map"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seamed_lift_is_a_covering() {
    let dir = TempDir::new().unwrap();
    cycle(dir.path());
    let v = json(
        dir.path(),
        &["lift", "seam", "--g", "c6.edges", "--copies", "3", "--u", "0", "--v", "1", "--label", "a", "-o", "l.edges", "--emit-map", "l.map"],
    );
    assert_eq!(v["covering"], true);
    assert_eq!(v["fibre_size"], 3);
    assert_eq!(v["components"], 1);
    let v = json(dir.path(), &["graph", "verify-cover", "--cover", "l.edges", "--base", "c6.edges", "--map", "l.map"]);
    assert_eq!(v["ok"], true);
}

#[test]
fn transfer_agrees_with_oi_run() {
    let dir = TempDir::new().unwrap();
    grid(dir.path());
    cycle(dir.path());
    ok(dir.path(), &["sim", "run", "--alg", "oi-local-max", "--graph", "c6.edges", "--order", "c6.rank", "-o", "a.json"]);
    ok(
        dir.path(),
        &["sim", "run", "--alg", "oi-local-max", "--model", "oi", "--graph", "c6.edges", "--transfer-h", "grid.edges", "--transfer-order", "grid.rank", "-o", "b.json"],
    );
    let v = json(dir.path(), &["sim", "compare", "--a", "a.json", "--b", "b.json"]);
    assert_eq!((v["agreement"]["num"].as_u64(), v["agreement"]["den"].as_u64()), (Some(5), Some(6)));
    let o = homogen(dir.path(), &["sim", "run", "--alg", "oi-local-max", "--model", "po", "--graph", "c6.edges", "--order", "c6.rank"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn optimum_and_ratio() {
    let dir = TempDir::new().unwrap();
    cycle(dir.path());
    let v = json(dir.path(), &["sim", "optimum", "--problem", "dominating-set", "--graph", "c6.edges"]);
    assert_eq!(v["optimum"], 2);
    let v = json(dir.path(), &["sim", "ratio", "--problem", "dominating-set", "--alg", "po-all", "--graph", "c6.edges"]);
    assert_eq!(v["ratio"], serde_json::json!({ "num": 3, "den": 1 }));
}

#[test]
fn ramsey_search_returns_verified_witness() {
    let dir = TempDir::new().unwrap();
    let v = json(dir.path(), &["ramsey", "search", "--alg", "id-parity", "--m", "4", "--pool", "1..9"]);
    assert_eq!(v["t"], 3);
    let j: Vec<u64> = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(j.len(), 4);
    let ids = |s: &[u64]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let first = json(dir.path(), &["ramsey", "color", "--alg", "id-parity", "--ids", &ids(&j[..3])]);
    let last = json(dir.path(), &["ramsey", "color", "--alg", "id-parity", "--ids", &ids(&j[1..])]);
    assert_eq!(first["color"], last["color"]);
    assert_eq!(first["color"], v["color"]);
}

#[test]
fn report_is_order_independent() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    grid(d);
    cycle(d);
    write(d, "m.json", &ok(d, &["--json", "order", "measure", "--graph", "grid.edges", "--order", "grid.rank", "--r", "1"]));
    write(d, "s.json", &ok(d, &["--json", "gens", "schedule", "--g", "3", "--m", "1"]));
    write(d, "r.json", &ok(d, &["--json", "sim", "ratio", "--problem", "vertex-cover", "--alg", "po-all", "--graph", "c6.edges"]));
    let a = ok(d, &["report", "--input", "m.json", "--input", "s.json", "--input", "r.json"]);
    let b = ok(d, &["report", "--input", "r.json", "--input", "m.json", "--input", "s.json"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    for s in ["homogeneity", "schedule", "ratios"] {
        assert_eq!(v["sections"][s].as_array().map(Vec::len), Some(1), "{s}");
    }
}
