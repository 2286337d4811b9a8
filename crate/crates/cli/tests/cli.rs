//! End-to-end runs of the `multiloop` binary: exit codes, report formats,
//! golden files, configuration and emitted artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

fn multiloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiloop"))
        .args(args)
        .env_remove("MULTILOOP_GOLDEN_DIR")
        .current_dir(std::env::temp_dir())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Vec<Value> {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn coulomb_checks_pass_against_golden_files() {
    let dir = golden_dir();
    let out = multiloop(&["--json", "--golden-dir", dir.to_str().unwrap(), "coulomb", "--r", "3", "--flavor"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let reports = json(&out);
    let jacobi = reports.iter().find(|r| r["name"] == "jacobi").unwrap();
    assert_eq!(jacobi["derived"]["golden_bracket_x1y1"], "enforced");
    let hanany = reports.iter().find(|r| r["name"] == "hanany").unwrap();
    assert_eq!(hanany["derived"]["golden_constant"], "enforced");
    assert!(reports.iter().any(|r| r["name"] == "flavor" && r["status"] == "pass"));
}

#[test]
fn slice_relation_is_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("relation.txt");
    let golden = golden_dir();
    let out = multiloop(&[
        "--golden-dir",
        golden.to_str().unwrap(),
        "slice",
        "--r",
        "2",
        "--emit-relation",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.trim(), "x1^2*y2 + x1*y1*w - 16*x2^2*y2^2 + x2*y1^2 + 8*x2*y2*w^2 - w^4");
    assert!(String::from_utf8_lossy(&out.stdout).contains("golden_alpha = enforced"));
}

#[test]
fn bracket_is_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x1y1.txt");
    let out = multiloop(&["coulomb", "--r", "2", "--checks", "starlet", "--emit-bracket", "x1y1", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&file).unwrap().trim(), "4*u1^2*v1^2 - 8*u1*u2*v1*v2 + 4*u2^2*v2^2");
    let bad = multiloop(&["coulomb", "--r", "2", "--emit-bracket", "x2y2", file.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_is_byte_stable() {
    let args = ["--json", "verify", "--r", "2..3", "--checks", "ci,starlet,poifo,sigma,structure"];
    let a = multiloop(&args);
    let b = multiloop(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).iter().all(|r| r.get("wall_ms").is_none()));
    let timed = multiloop(&["--json", "--timings", "verify", "--r", "2", "--checks", "starlet"]);
    assert!(json(&timed)[0]["wall_ms"].is_u64());
}

#[test]
fn empty_selection_is_empty_array() {
    let out = multiloop(&["--json", "verify", "--checks", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[]");
}

#[test]
fn injected_control_fails_exactly_its_checks() {
    let out = multiloop(&["--json", "verify", "--r", "2", "--checks", "starlet,redundancy,poifo,flavor", "--inject", "flip_y2"]);
    assert_eq!(out.status.code(), Some(1));
    let failed: Vec<String> = json(&out)
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, ["flavor", "starlet"]);
    let starlet = json(&out).into_iter().find(|r| r["name"] == "starlet").unwrap();
    assert!(starlet["witness"].as_str().unwrap().starts_with("relation: residual "));
}

#[test]
fn stated_rescaling_fails() {
    let out = multiloop(&["verify", "--r", "2", "--checks", "hanany", "--hanany-rescaling", "stated"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("required_k_squared = 1/8"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(multiloop(&["verify", "--checks", "bogus"]).status.code(), Some(2));
    assert_eq!(multiloop(&["verify", "--r", "4..2"]).status.code(), Some(2));
    assert_eq!(multiloop(&["verify", "--inject", "flip_q"]).status.code(), Some(2));
    assert_eq!(multiloop(&["coulomb", "--r", "2", "--checks", "hilbert"]).status.code(), Some(2));
    assert_eq!(multiloop(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn golden_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hanany_r2_constant.json"), "\"1/4\"\n").unwrap();
    let out = multiloop(&["--golden-dir", dir.path().to_str().unwrap(), "verify", "--r", "2", "--checks", "hanany,jacobi"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("golden mismatch for constant"));
    assert!(text.contains("golden_bracket_x1y1 = unenforced"));
}

#[test]
fn bless_writes_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = multiloop(&["--golden-dir", path, "--bless", "verify", "--r", "2", "--checks", "trace"]);
    assert_eq!(out.status.code(), Some(0));
    let blessed: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace_r2_alpha.json")).unwrap()).unwrap();
    assert_eq!(blessed, serde_json::json!(["-1"]));
    let again = multiloop(&["--golden-dir", path, "verify", "--r", "2", "--checks", "trace"]);
    assert!(String::from_utf8_lossy(&again.stdout).contains("golden_alpha = enforced"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.conf");
    std::fs::write(&cfg, "# small run\nr = 1..2\nchecks = starlet, structure\nformat = json\n").unwrap();
    let out = multiloop(&["--config", cfg.to_str().unwrap(), "verify", "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    assert_eq!(reports.len(), 2);
    let structure = reports.iter().find(|r| r["name"] == "structure").unwrap();
    assert_eq!(structure["status"], "skipped");
    std::fs::write(&cfg, "truncate = lots\n").unwrap();
    assert_eq!(multiloop(&["--config", cfg.to_str().unwrap(), "verify"]).status.code(), Some(2));
}

#[test]
fn hilbert_subcommand() {
    let out = multiloop(&["--truncate", "12", "hilbert", "--rank", "2", "--loops", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["comparison"], "Equal");
    assert_eq!(v["ci_diagnostic"]["outcome"], "complete_intersection_shape");
    let text = multiloop(&["--truncate", "10", "hilbert", "--rank", "3", "--loops", "2", "--framing", "2"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("not available for framing 2"));
    assert_eq!(multiloop(&["hilbert", "--rank", "4", "--loops", "2"]).status.code(), Some(2));
}
