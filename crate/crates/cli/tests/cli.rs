//! End-to-end behavior of the command-line interface: file round-trips,
//! error tagging and exit codes, golden recording, and manifest replay.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU64, Ordering};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sumdist"))
}

static DIR_SEQ: AtomicU64 = AtomicU64::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!(
        "sumdist-cli-test-{}-{}-{}",
        std::process::id(),
        tag,
        DIR_SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn sha256(path: &Path) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(std::fs::read(path).unwrap()))
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = scratch_dir("roundtrip");
    let seq = dir.join("seq.json");
    let report = dir.join("report.json");
    let out = run(&[
        "construct",
        "--family",
        "tilde",
        "--n",
        "10",
        "--out",
        seq.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));

    let out = run(&[
        "verify",
        "--input",
        seq.to_str().unwrap(),
        "--pair-cap",
        "5",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"status\": \"distinct\""));

    // The manifest records the same digest the file actually has, and the
    // verify run read back bit-identical bytes.
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("seq.json.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(
        manifest["outputs"][0]["sha256"].as_str().unwrap(),
        sha256(&seq)
    );
    let verify_manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("report.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(
        verify_manifest["inputs"][0]["sha256"].as_str().unwrap(),
        manifest["outputs"][0]["sha256"].as_str().unwrap()
    );
}

#[test]
fn malformed_input_is_tagged_input_error() {
    let dir = scratch_dir("badjson");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = run(&[
        "verify",
        "--input",
        bad.to_str().unwrap(),
        "--lambda",
        "1",
        "--out",
        dir.join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_of(&out);
    assert!(err.starts_with("E-INPUT:"), "stderr: {err}");
    assert_eq!(
        err.trim_end().lines().count(),
        1,
        "single-line error expected"
    );
}

#[test]
fn domain_error_is_tagged() {
    let dir = scratch_dir("domain");
    let out = run(&[
        "bounds",
        "--n",
        "10",
        "--k",
        "1",
        "--lambda",
        "7",
        "--format",
        "csv",
        "--out",
        dir.join("b.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).starts_with("E-INPUT:"));
}

#[test]
fn capacity_error_exits_two() {
    let dir = scratch_dir("capacity");
    let seq = dir.join("p40.json");
    let out = run(&[
        "construct",
        "--family",
        "powers2",
        "--n",
        "40",
        "--out",
        seq.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = bin()
        .args([
            "verify",
            "--input",
            seq.to_str().unwrap(),
            "--lambda",
            "1",
            "--engine",
            "mitm",
            "--memory-budget",
            "4096",
            "--out",
            dir.join("r.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).starts_with("E-CAPACITY:"));
}

#[test]
fn memory_budget_env_is_honored() {
    let dir = scratch_dir("env");
    let seq = dir.join("p40.json");
    run(&[
        "construct",
        "--family",
        "powers2",
        "--n",
        "40",
        "--out",
        seq.to_str().unwrap(),
    ]);
    let out = bin()
        .env("DSL_MEMORY_BUDGET", "4096")
        .args([
            "verify",
            "--input",
            seq.to_str().unwrap(),
            "--lambda",
            "1",
            "--engine",
            "mitm",
            "--out",
            dir.join("r.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn random_search_requires_seed() {
    let out = run(&[
        "search", "random", "--n", "4", "--k", "1", "--lambda", "0.2", "--m", "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("--seed"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).to_lowercase().contains("usage"));
}

#[test]
fn shifted_requires_pair_cap() {
    let dir = scratch_dir("shifted");
    let seq = dir.join("seq.json");
    run(&[
        "construct",
        "--family",
        "tilde",
        "--n",
        "8",
        "--out",
        seq.to_str().unwrap(),
    ]);
    let out = run(&[
        "verify",
        "--input",
        seq.to_str().unwrap(),
        "--shifted",
        "128",
        "--out",
        dir.join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).starts_with("E-INPUT:"));
}

#[test]
fn golden_record_then_match_then_mismatch() {
    let dir = scratch_dir("golden");
    let golden = dir.join("exact.golden.json");
    let args = [
        "search", "exact", "--n", "3", "--k", "1", "--lambda", "1", "--max-m", "6", "--golden",
    ];
    let out = bin().args(args).arg(&golden).output().unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("golden recorded"));

    let out = bin().args(args).arg(&golden).output().unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(stderr_of(&out).contains("golden OK"));

    // A different search must not match the recorded outcome.
    let other = [
        "search", "exact", "--n", "4", "--k", "1", "--lambda", "1", "--max-m", "8", "--golden",
    ];
    let out = bin().args(other).arg(&golden).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).starts_with("E-DOMAIN:"));
}

#[test]
fn repro_detects_tampering() {
    let dir = scratch_dir("tamper");
    let seq = dir.join("seq.json");
    run(&[
        "construct",
        "--family",
        "powers2",
        "--n",
        "6",
        "--out",
        seq.to_str().unwrap(),
    ]);
    let manifest = dir.join("seq.json.manifest.json");
    // Corrupt the recorded digest.
    let text = std::fs::read_to_string(&manifest).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["outputs"][0]["sha256"] = serde_json::Value::String("0".repeat(64));
    std::fs::write(&manifest, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = run(&["repro", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("digest mismatch"));
}

#[test]
fn lift_via_cli() {
    let dir = scratch_dir("lift");
    let seq = dir.join("seq.json");
    let lifted = dir.join("lifted.json");
    run(&[
        "construct",
        "--family",
        "powers2",
        "--n",
        "4",
        "--out",
        seq.to_str().unwrap(),
    ]);
    let out = run(&[
        "construct",
        "--family",
        "lift",
        "--base",
        seq.to_str().unwrap(),
        "--k",
        "3",
        "--out",
        lifted.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let text = std::fs::read_to_string(&lifted).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["n"], 12);
    assert_eq!(doc["k"], 3);
}

#[test]
fn direct2_via_generated_base_and_precision_env() {
    let dir = scratch_dir("direct2");
    let seq = dir.join("d2.json");
    let out = run(&[
        "construct",
        "--family",
        "direct2",
        "--n",
        "30",
        "--base-length",
        "8",
        "--out",
        seq.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&seq).unwrap()).unwrap();
    assert_eq!(doc["n"], 30);

    // Bounds evaluate under the high-precision entropy path too.
    let out = bin()
        .env("DSL_PRECISION_BITS", "256")
        .args([
            "bounds", "--n", "30", "--k", "1", "--lambda", "0.1", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("nullstellensatz"));
}

#[test]
fn direct1_via_generated_base() {
    let dir = scratch_dir("direct1");
    let seq = dir.join("d1.json");
    let out = run(&[
        "construct",
        "--family",
        "direct1",
        "--n",
        "16",
        "--base-length",
        "4",
        "--out",
        seq.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let report = dir.join("r.json");
    let out = run(&[
        "verify",
        "--input",
        seq.to_str().unwrap(),
        "--lambda",
        "0.24",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(std::fs::read_to_string(&report)
        .unwrap()
        .contains("distinct"));
}
