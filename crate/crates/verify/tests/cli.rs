use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verify"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dunkl-verify-{}-{name}", std::process::id()))
}

fn without_timings(path: &PathBuf) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn coverage_lists_every_equation() {
    let out = bin().arg("coverage").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("UNMAPPED"));
    assert!(text.contains("eq-3.13"));
}

#[test]
fn passing_run_exits_zero_and_is_deterministic() {
    let (a, b) = (tmp("a.json"), tmp("b.json"));
    for path in [&a, &b] {
        let status = bin()
            .args(["run", "--suite", "identities", "--suite", "ibp", "--config"])
            .arg(config("quick.toml"))
            .arg("--output")
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(without_timings(&a), without_timings(&b));
    let v = without_timings(&a);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["summary"]["fail"], 0);
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn failing_check_sets_exit_code() {
    let out = tmp("fail.json");
    let status = bin()
        .args(["run", "--suite", "isometry", "--config"])
        .arg(config("quick.toml"))
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let v = without_timings(&out);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["check_id"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|id| *id == "cor-5.4-pointwise"));
    let _ = std::fs::remove_file(out);
}

#[test]
fn bad_config_is_an_error() {
    let path = tmp("bad.toml");
    std::fs::write(&path, "[root_system]\nkind = \"z2d\"\nkappa = [\"-1\"]\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&path).output().unwrap();
    assert!(!out.status.success());
    let _ = std::fs::remove_file(path);
}
