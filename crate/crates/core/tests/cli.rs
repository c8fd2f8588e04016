//! Command-line behavior and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use revxdt::fixtures;
use revxdt::format::serialize_transducer;
use tempfile::TempDir;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("revxdt").chain(args.iter().copied());
    let code = revxdt::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_reversibility() {
    let (code, out, _) = cli(&["check", &fixture("a2.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reversible"], true);
    let (_, out, _) = cli(&["check", &fixture("a1.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["deterministic"].clone(), v["codeterministic"].clone()), (true.into(), false.into()));
}

#[test]
fn run_accepts_and_rejects() {
    let (code, out, _) = cli(&["run", &fixture("a2.json"), "--input", "ab"]);
    assert_eq!((code, out.trim()), (1, "rejected"));
    let (code, _, _) = cli(&["run", &fixture("a2.json"), "--input", "baab"]);
    assert_eq!(code, 0);
    let (code, out, _) = cli(&["run", &fixture("t1.json"), "--input", "ab"]);
    assert_eq!(code, 0);
    assert!(!out.trim().is_empty());
}

#[test]
fn equivalence_exit_codes() {
    let (code, out, _) = cli(&["equiv", &fixture("a1.json"), &fixture("a2.json"), "--max-len", "4"]);
    assert_eq!((code, out.trim()), (0, "equivalent"));
    let dir = TempDir::new().unwrap();
    let mirror = write(&dir, "mirror.json", &serialize_transducer(&fixtures::mirror_ab()));
    let (code, out, _) = cli(&["equiv", &fixture("id.json"), s(&mirror), "--max-len", "2"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("counterexample \"ab\""), "{out}");
    let (code, _, _) = cli(&["equiv", &fixture("a1.json"), &fixture("id.json")]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let text = fixtures::A2_JSON.replacen("\"polarity\": \"-\"", "\"polarity\": \"x\"", 1);
    let bad = write(&dir, "bad.json", &text);
    let (code, _, err) = cli(&["check", s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    let (code, _, _) = cli(&["check", s(&dir.path().join("missing.json"))]);
    assert_eq!(code, 2);
    let (code, _, _) = cli(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn constructions_write_reversible_machines() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("outline.json");
    assert_eq!(cli(&["treeoutline", &fixture("t1.json"), "-o", s(&out)]).0, 0);
    assert_eq!(cli(&["equiv", &fixture("t1.json"), s(&out)]).0, 0);
    let (_, checked, _) = cli(&["check", s(&out)]);
    assert!(checked.contains("\"reversible\": true"));

    let rev = dir.path().join("rev.json");
    assert_eq!(cli(&["reversibilize", &fixture("a1.json"), "-o", s(&rev)]).0, 0);
    assert_eq!(cli(&["equiv", &fixture("a1.json"), s(&rev), "--max-len", "4"]).0, 0);

    let comp = dir.path().join("comp.json");
    assert_eq!(cli(&["compose", &fixture("id.json"), &fixture("id.json"), "--trim", "-o", s(&comp)]).0, 0);
    assert_eq!(cli(&["equiv", &fixture("id.json"), s(&comp), "--max-len", "4"]).0, 0);
}

#[test]
fn uniformize_then_check() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("u.json");
    assert_eq!(cli(&["uniformize", &fixture("rel.json"), "-o", s(&out)]).0, 0);
    let (code, text, _) = cli(&["uniformcheck", s(&out), &fixture("rel.json"), "--max-len", "3"]);
    assert_eq!((code, text.trim()), (0, "ok"));
    let dir2 = TempDir::new().unwrap();
    let mirror = write(&dir2, "mirror.json", &serialize_transducer(&fixtures::mirror_ab()));
    let (code, _, _) = cli(&["uniformcheck", &fixture("id.json"), s(&mirror), "--max-len", "2"]);
    assert_eq!(code, 1);
    let (code, _, err) = cli(&["uniformcheck", &fixture("rel.json"), &fixture("rel.json"), "--max-len", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("not functional"), "{err}");
    let (code, text, _) = cli(&["uniformize", &fixture("rel.json"), "--stage", "follower"]);
    assert_eq!(code, 0);
    assert!(text.contains("\"states\""));
}

#[test]
fn budget_is_enforced() {
    let (code, _, err) = cli(&["uniformize", &fixture("rel.json"), "--max-states", "10"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn sst_commands() {
    let (code, out, _) = cli(&["ssteval", &fixture("pal.sst.json"), "--input", "ab"]);
    assert_eq!((code, out.trim()), (0, "abba"));
    let (code, out, _) = cli(&["stats", &fixture("t1.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("trimmed_states"));
}

#[test]
fn dot_output() {
    let (code, out, _) = cli(&["dot", &fixture("t1.json"), "--run-tree", "ab"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
}

#[test]
fn binary_exit_code() {
    let status = Command::new(env!("CARGO_BIN_EXE_revxdt"))
        .args(["run", &fixture("a2.json"), "--input", "ab"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&status.stdout).trim(), "rejected");
}
