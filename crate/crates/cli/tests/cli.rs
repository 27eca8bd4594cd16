use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ergo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergo")).args(args).current_dir(cwd).output().unwrap()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn error_record(out: &Output) -> Value {
    let line = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(line.lines().last().unwrap()).unwrap()
}

fn run(dir: &TempDir, cmd: &str, body: &str, out: &str) -> Output {
    let cfg = write_config(dir, &format!("{cmd}.json"), body);
    ergo(&[cmd, "--config", cfg.to_str().unwrap(), "--out", out], dir.path())
}

#[test]
fn missing_required_field_is_config_error_without_output() {
    let dir = TempDir::new().unwrap();
    let out = run(&dir, "resilience", r#"{"c": 2.0}"#, "res");
    assert_eq!(out.status.code(), Some(2));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "config");
    assert_eq!(rec["exit_code"], 2);
    assert!(!dir.path().join("res").exists());
}

#[test]
fn unknown_field_and_missing_config() {
    let dir = TempDir::new().unwrap();
    let out = run(&dir, "sample", r#"{"n": 10, "beta": 1.0, "bogus": 1}"#, "s");
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["message"].as_str().unwrap().contains("bogus"));

    assert_eq!(ergo(&["sample"], dir.path()).status.code(), Some(2));
    assert_eq!(ergo(&["sample", "--config", "absent.json"], dir.path()).status.code(), Some(2));
    assert_eq!(ergo(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn oversized_exhaustive_search_is_capacity_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&dir, "spectral", r#"{"family": "complete", "size": 30}"#, "sp");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "capacity");
    assert!(!dir.path().join("sp").exists());
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let out = run(&dir, "spectral", r#"{"family": "cycle", "size": 6}"#, "blocker/x");
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(error_record(&out)["error"], "io");
}

#[test]
fn k4_report_format() {
    let dir = TempDir::new().unwrap();
    let out = run(&dir, "spectral", r#"{"family": "complete", "size": 4}"#, "k4");
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("k4/spectral.json")).unwrap();
    assert!(text.contains(r#""phi": 2.00000000"#));
    assert!(text.contains(r#""lambda2_L": 4.00000000"#));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["family"], "complete");
    assert!(v["config"].get("out").is_none());
    for key in ["seed", "target_total", "result"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn fixtures_match_families() {
    let dir = TempDir::new().unwrap();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (file, family, size) in
        [("k4", "complete", 4), ("c6", "cycle", 6), ("star3", "star", 3), ("p5", "path", 5)]
    {
        let path = fixtures.join(format!("{file}.edges"));
        let a = run(&dir, "spectral", &format!(r#"{{"graph": {:?}}}"#, path.to_str().unwrap()), "a");
        let b = run(&dir, "spectral", &format!(r#"{{"family": "{family}", "size": {size}}}"#), "b");
        assert!(a.status.success() && b.status.success());
        let result = |d: &str| -> Value {
            let v: Value =
                serde_json::from_slice(&std::fs::read(dir.path().join(d).join("spectral.json")).unwrap())
                    .unwrap();
            v["result"]["report"].clone()
        };
        assert_eq!(result("a"), result("b"), "{file}");
    }
}

#[test]
fn empty_grid_gives_header_only_csv() {
    let dir = TempDir::new().unwrap();
    let out = run(
        &dir,
        "resilience",
        r#"{"n": 50, "c": 3.0, "beta": 1.0, "p_grid": [], "trials": 10}"#,
        "r",
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("r/resilience.csv")).unwrap();
    assert_eq!(csv.trim_end(), "p,estimate,ci_low,ci_high,isolation_bound");
}

#[test]
fn seed_and_set_overrides_take_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "d.json", r#"{"n": 200, "c": 2.0, "beta": 1.0, "seed": 1}"#);
    let cfg = cfg.to_str().unwrap();
    let out = ergo(
        &["degrees", "--config", cfg, "--seed", "7", "--set", "n=300", "--out", "d"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("d/degrees.json")).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["config"]["n"], 300);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn different_seeds_differ() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s.json", r#"{"n": 20, "beta": 0.5, "c": 2.0, "samples": 2}"#);
    let cfg = cfg.to_str().unwrap();
    assert!(ergo(&["sample", "--config", cfg, "--seed", "1", "--out", "a"], dir.path()).status.success());
    assert!(ergo(&["sample", "--config", cfg, "--seed", "2", "--out", "b"], dir.path()).status.success());
    let read = |d: &str| std::fs::read(dir.path().join(d).join("energy_r0.csv")).unwrap();
    assert_ne!(read("a"), read("b"));
}
