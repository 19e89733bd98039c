//! End-to-end checks of the `gevlearn` binary: exit codes, artifact
//! layout, and run-to-run determinism.

use std::path::Path;
use std::process::Command;

fn gevlearn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gevlearn"))
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

const LEARN_CONFIG: &str = r#"{
  "kind": "learn",
  "spec": {"variant": "MNL", "n": 3, "nests": [{"members": [0, 1, 2], "lambda": 1.0}]},
  "environment": {"kind": "adversarial_alternating", "n": 3, "u_max": 1.0, "horizon": 200, "seed": 4},
  "eta": "optimal"
}"#;

#[test]
fn learn_subcommand_writes_artifacts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("learn.json");
    write(&config, LEARN_CONFIG);
    let out = dir.path().join("artifacts");
    let status = gevlearn()
        .args(["learn", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("regret_curve.csv").exists());
    assert!(out.join("trajectory.csv").exists());
    assert!(out.join("summary.json").exists());
}

#[test]
fn identical_seed_gives_byte_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("learn.json");
    write(&config, LEARN_CONFIG);
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let status = gevlearn()
            .args(["learn", "--config"])
            .arg(&config)
            .args(["--seed", "99", "--out-dir"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(out.join("regret_curve.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn invalid_lambda_in_config_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    write(
        &config,
        r#"{
  "kind": "learn",
  "spec": {"variant": "NL", "n": 2, "nests": [{"members": [0], "lambda": 0.0}, {"members": [1], "lambda": 1.0}]},
  "environment": {"kind": "iid_uniform", "n": 2, "u_max": 1.0, "horizon": 10, "seed": 1},
  "eta": 1.0
}"#,
    );
    let output = gevlearn()
        .args(["learn", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("lambda"), "stderr: {stderr}");
}

#[test]
fn kind_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("learn.json");
    write(&config, LEARN_CONFIG);
    let output = gevlearn()
        .args(["market", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("subcommand"));
}

#[test]
fn bounds_subcommand_emits_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bounds.json");
    write(
        &config,
        r#"{
  "kind": "bounds",
  "models": [
    {"name": "Logit", "spec": {"variant": "MNL", "n": 10, "nests": [{"members": [0,1,2,3,4,5,6,7,8,9], "lambda": 1.0}]}},
    {"name": "NL", "spec": {"variant": "NL", "n": 10, "nests": [{"members": [0,1,2,3,4], "lambda": 0.5}, {"members": [5,6,7,8,9], "lambda": 1.0}]}}
  ],
  "horizon": 10000,
  "u_max": 1.0
}"#,
    );
    let out = dir.path().join("out");
    let status = gevlearn()
        .args(["bounds", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("bounds_table.csv")).unwrap();
    assert!(csv.lines().count() == 3);
    assert!(csv.contains("Logit"));
    assert!(out.join("bounds_table.txt").exists());
}

#[test]
fn market_subcommand_reads_trade_log_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("trades.txt"), "1.0, 0.0\n-0.5, 0.5\n");
    let config = dir.path().join("market.json");
    write(
        &config,
        r#"{
  "kind": "market",
  "spec": {"variant": "MNL", "n": 2, "nests": [{"members": [0, 1], "lambda": 1.0}]},
  "liquidity": 1.0,
  "trades": {"file": "trades.txt"},
  "audit_samples": 120,
  "seed": 3
}"#,
    );
    let out = dir.path().join("out");
    let status = gevlearn()
        .args(["market", "--config"])
        .arg(&config)
        .arg("--out-dir")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("market_trajectory.csv")).unwrap();
    // Initial quote plus two executed trades.
    assert_eq!(csv.lines().count(), 4);
}
