use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn factorlab(args: &[&str]) -> Output {
    run_with_env(args, None)
}

fn run_with_env(args: &[&str], budget: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_factorlab"));
    cmd.args(args).env_remove("FACTORLAB_BUDGET");
    if let Some(b) = budget {
        cmd.env("FACTORLAB_BUDGET", b);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops wall-clock and state-count telemetry, which may vary between runs.
fn strip_telemetry(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("telemetry");
            m.values_mut().for_each(strip_telemetry);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_telemetry),
        _ => {}
    }
}

#[test]
fn list_prints_every_entry() {
    let o = factorlab(&["list", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "beta",
            "lambda-oplus",
            "shuffling",
            "beta-Y",
            "betav-Z",
            "beta-eta",
            "prob-cbv"
        ]
    );
}

#[test]
fn matching_catalog_exits_zero() {
    let o = factorlab(&["check", "--calculus", "beta"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("strong-postponement [head] expected Fail, observed Fail"));
}

#[test]
fn definite_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("be.json");
    std::fs::write(
        &path,
        r#"{"name":"be","rules":["beta","eta"],"essential":"head"}"#,
    )
    .unwrap();
    let o = factorlab(&[
        "check",
        "--calculus-file",
        path.to_str().unwrap(),
        "--suite",
        "factorization-oracle",
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn unknown_only_exits_two() {
    let o = run_with_env(
        &[
            "check",
            "--calculus",
            "beta",
            "--suite",
            "factorization-oracle",
        ],
        Some("1"),
    );
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("observed Unknown"));
}

#[test]
fn budget_flag_beats_environment() {
    let o = run_with_env(
        &[
            "check",
            "--calculus",
            "beta",
            "--suite",
            "factorization-oracle",
            "--budget",
            "100000",
        ],
        Some("1"),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(
        code(&factorlab(&["check", "--calculus", "no-such-calculus"])),
        64
    );
    assert_eq!(code(&factorlab(&["frobnicate"])), 64);
    assert_eq!(
        code(&factorlab(&[
            "check",
            "--max-size",
            "0",
            "--calculus",
            "beta"
        ])),
        64
    );
    assert_eq!(
        code(&run_with_env(
            &["check", "--calculus", "beta"],
            Some("lots")
        )),
        64
    );
    assert_eq!(
        code(&factorlab(&[
            "check",
            "--calculus",
            "beta",
            "--suite",
            "nothing"
        ])),
        64
    );
}

#[test]
fn json_is_reproducible_modulo_telemetry() {
    let args = [
        "check",
        "--calculus",
        "lambda-oplus",
        "--format",
        "json",
        "--max-size",
        "6",
    ];
    let mut a: Value = serde_json::from_str(&stdout(&factorlab(&args))).unwrap();
    let mut b: Value = serde_json::from_str(&stdout(&factorlab(&args))).unwrap();
    strip_telemetry(&mut a);
    strip_telemetry(&mut b);
    assert_eq!(a, b);
    assert_eq!(a["command"], "check");
}

#[test]
fn out_writes_the_file_and_nothing_else() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = factorlab(&["demo", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.is_object() || v.is_array());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1, "temporary file left behind");
}

#[test]
fn out_into_missing_directory_fails_cleanly() {
    let o = factorlab(&["list", "--out", "/nonexistent/dir/x.json"]);
    assert_ne!(code(&o), 0);
    assert!(!Path::new("/nonexistent/dir/x.json").exists());
}

#[test]
fn demos_replay() {
    let o = factorlab(&["demo"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("MISMATCH"));
    assert_eq!(code(&factorlab(&["demo", "nope"])), 64);
}

#[test]
fn search_reports_smallest_counterexample() {
    let o = factorlab(&[
        "search",
        "--kind",
        "root-linear-swap",
        "--first",
        "beta",
        "--second",
        "eta",
        "--max-size",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = v.to_string();
    assert!(s.contains("\"failed\""), "{s}");
}

#[test]
fn corpus_counts_small_sizes() {
    let o = factorlab(&["corpus", "--calculus", "beta", "--max-size", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    // 2 variables, 3 of size two, 8 of size three, then the catalog fixture.
    assert_eq!(lines.len(), 14);
    assert_eq!(lines[13], "(λx.x x x) ((λz.z) z)");
}
