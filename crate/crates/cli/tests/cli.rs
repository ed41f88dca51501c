use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn arithq(command: &str, config: &str, dir: &Path, seed: Option<u64>) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arithq"));
    cmd.arg(command)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"));
    if let Some(s) = seed {
        cmd.arg("--seed").arg(s.to_string());
    }
    cmd.output().unwrap()
}

fn report(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join("out").join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

const F1: &str = r#"{"field": "Q", "prime": 5, "bound": 50, "level": 3}"#;
const F2: &str = r#"{"field": 5, "prime": 3, "bound": 100, "level": 3}"#;

#[test]
fn verify_f1() {
    let dir = tempfile::tempdir().unwrap();
    let out = arithq("verify", F1, dir.path(), None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(dir.path(), "verify");
    assert_eq!(r["result"]["pass"], true);
    assert_eq!(r["result"]["levels"].as_array().unwrap().len(), 3);
    // the config is echoed
    assert_eq!(r["config"]["bound"], 50);
}

#[test]
fn match_f2_against_shuffled_copy() {
    let dir = tempfile::tempdir().unwrap();
    let out = arithq("match", F2, dir.path(), Some(11));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let r = report(dir.path(), "match");
    let res = &r["result"];
    assert_eq!(res["case"], "2-1");
    assert_eq!(res["p"], 3);
    assert_eq!(res["evaluation"]["residueCharsPreserved"], true);
    assert_eq!(res["sigma"], "undetermined(real-quadratic)");
    for key in ["growthTable", "matching", "diagnostics"] {
        assert!(res.get(key).is_some(), "{key}");
    }
}

#[test]
fn ramified_overlap_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = arithq(
        "build",
        r#"{"field": "Q", "prime": 5, "primes": [2, 5, 7], "level": 2}"#,
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ramified prime in M"));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = arithq(
        "build",
        r#"{"field": "Q", "prime": 6, "level": 2}"#,
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
}

#[test]
fn mismatched_p_fails_with_group_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"field": "Q", "prime": 5, "bound": 30, "level": 3,
                  "match": {"field": "Q", "prime": 7, "bound": 30, "level": 3}}"#;
    let out = arithq("match", cfg, dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path(), "match");
    let kinds: Vec<&str> = r["result"]["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"group mismatch"));
}

#[test]
fn aut_on_small_slot_machine() {
    let dir = tempfile::tempdir().unwrap();
    let out = arithq(
        "aut",
        r#"{"field": "Q", "prime": 3, "primes": [2, 5, 7], "level": 2}"#,
        dir.path(),
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let r = report(dir.path(), "aut");
    assert_eq!(r["result"]["exhaustive"]["equalsPredicted"], true);
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = r#"{"field": "Q", "prime": 5, "bound": 30, "level": 3, "precision": 20}"#;
    assert_eq!(
        arithq("match", cfg, a.path(), Some(3)).status.code(),
        Some(0)
    );
    assert_eq!(
        arithq("match", cfg, b.path(), Some(3)).status.code(),
        Some(0)
    );
    let read = |d: &Path| std::fs::read(d.join("out/match.json")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn reconstruct_rational_tower() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"field": "Q", "prime": 7, "bound": 40, "level": 3, "precision": 20}"#;
    let out = arithq("reconstruct", cfg, dir.path(), None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let r = report(dir.path(), "reconstruct");
    assert_eq!(r["result"]["recoverP"]["p"], 7);
    assert_eq!(r["result"]["case"], "1");
    assert_eq!(r["result"]["orbitsMatchFibers"], true);
}
