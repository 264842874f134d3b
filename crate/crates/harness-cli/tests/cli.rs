//! End-to-end tests of the `hdosc` binary: exit codes, overrides, and
//! byte-level determinism across reruns and worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn hdosc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdosc"))
        .args(args)
        .current_dir(dir)
        .env_remove("HDOSC_THREADS")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL_GRAPH: &str = r#"{
    "experiment": "graph",
    "nodes": 10,
    "dim": 64,
    "edge_probabilities": [0.3],
    "trials": 3,
    "out": "graph.csv"
}"#;

#[test]
fn successful_run_writes_hashed_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "op.json",
        r#"{"experiment": "op-error", "grid": 8, "drive": {"settle_periods": 2}}"#,
    );
    let out = hdosc(dir.path(), &["op-error", "--config", &cfg]);
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    for name in ["op-error.csv", "op-error-hist.csv", "op-error-summary.csv"] {
        assert!(stdout.contains(&format!("wrote {name}")));
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("# config_hash="));
    }
}

#[test]
fn unknown_config_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"experiment": "graph", "nodse": 10}"#,
    );
    let out = hdosc(dir.path(), &["graph", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("nodse"), "{stderr}");
}

#[test]
fn experiment_tag_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", SMALL_GRAPH);
    let out = hdosc(dir.path(), &["resonator", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn missing_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = hdosc(dir.path(), &["graph", "--config", "nope.json"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn zero_edge_probability_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "p0.json",
        r#"{"experiment": "graph", "edge_probabilities": [0.0], "dim": 64, "nodes": 8, "trials": 2}"#,
    );
    let out = hdosc(dir.path(), &["graph", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn inapplicable_overrides_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "op.json",
        r#"{"experiment": "op-error", "grid": 8, "drive": {"settle_periods": 2}}"#,
    );
    let out = hdosc(dir.path(), &["op-error", "--config", &cfg, "--seed", "5"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let out = hdosc(dir.path(), &["op-error", "--config", &cfg, "--backend", "phase"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn failed_check_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "tight.json",
        r#"{"experiment": "op-error", "grid": 8, "drive": {"settle_periods": 2}, "tolerance": 1e-9}"#,
    );
    let out = hdosc(dir.path(), &["op-error", "--config", &cfg, "--check"]);
    assert_eq!(out.status.code(), Some(4), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("check: FAIL"), "{stdout}");
    // The result files are still written; --check only changes the verdict.
    assert!(dir.path().join("op-error.csv").exists());
}

#[test]
fn backend_override_limits_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", SMALL_GRAPH);
    let out = hdosc(dir.path(), &["graph", "--config", &cfg, "--backend", "phase"]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("graph.csv")).unwrap();
    let backends: Vec<&str> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert!(!backends.is_empty());
    assert!(backends.iter().all(|b| *b == "phase"), "{backends:?}");
}

#[test]
fn seed_override_changes_bytes_and_reruns_do_not() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", SMALL_GRAPH);

    let run = |args: &[&str], capture: &str| -> Vec<u8> {
        let out = hdosc(dir.path(), args);
        assert!(out.status.success(), "{out:?}");
        std::fs::read(dir.path().join(capture)).unwrap()
    };
    let base = run(&["graph", "--config", &cfg], "graph.csv");
    let again = run(&["graph", "--config", &cfg], "graph.csv");
    assert_eq!(base, again, "identical config+seed must reproduce bytes");

    let reseeded = run(&["graph", "--config", &cfg, "--seed", "999"], "graph.csv");
    assert_ne!(base, reseeded, "a different seed is a different run");
}

#[test]
fn worker_count_never_changes_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", SMALL_GRAPH);
    let run_with_threads = |threads: &str| -> Vec<u8> {
        let out = Command::new(env!("CARGO_BIN_EXE_hdosc"))
            .args(["graph", "--config", &cfg])
            .current_dir(dir.path())
            .env("HDOSC_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        std::fs::read(dir.path().join("graph.csv")).unwrap()
    };
    assert_eq!(run_with_threads("1"), run_with_threads("4"));
}

#[test]
fn bad_thread_count_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", SMALL_GRAPH);
    let out = Command::new(env!("CARGO_BIN_EXE_hdosc"))
        .args(["graph", "--config", &cfg])
        .current_dir(dir.path())
        .env("HDOSC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn out_override_redirects_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g.json", SMALL_GRAPH);
    let out = hdosc(
        dir.path(),
        &["graph", "--config", &cfg, "--out", "runs/alt.csv"],
    );
    assert!(out.status.success(), "{out:?}");
    assert!(dir.path().join("runs/alt.csv").exists());
    assert!(dir.path().join("runs/alt-summary.csv").exists());
    assert!(!dir.path().join("graph.csv").exists());
}
