//! End-to-end runs of the `qcoherence` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcoherence")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_state(dir: &Path, name: &str, re: &[[f64; 2]; 2], im: &[[f64; 2]; 2]) -> PathBuf {
    let path = dir.join(name);
    let body = serde_json::json!({ "dim": 2, "re": re, "im": im });
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

fn plus_state(dir: &Path) -> PathBuf {
    let out = run(&["max-coherent", "--d", "2"]);
    assert_eq!(code(&out), 0);
    let path = dir.join("plus.json");
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

const ZERO: [[f64; 2]; 2] = [[0.0, 0.0], [0.0, 0.0]];

#[test]
fn coherence_of_plus_state() {
    let dir = TempDir::new().unwrap();
    let state = plus_state(dir.path());
    let out = run(&["coherence", "--state", state.to_str().unwrap(), "--measure", "cq", "--q", "0.5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["converged"], true);
}

#[test]
fn diagonal_state_has_zero_coherence_for_every_measure() {
    let dir = TempDir::new().unwrap();
    let state = write_state(dir.path(), "diag.json", &[[0.7, 0.0], [0.0, 0.3]], &ZERO);
    for (measure, q) in [("cq", "0.3"), ("c-half", "0.5"), ("cg", "0.5"), ("tsallis-alpha", "2"), ("l1", "0.5"), ("rel-ent", "0.5")] {
        let out = run(&["coherence", "--state", state.to_str().unwrap(), "--measure", measure, "--q", q]);
        assert_eq!(code(&out), 0, "{measure}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout_json(&out)["value"].as_f64().unwrap().abs() < 1e-8, "{measure}");
    }
}

#[test]
fn q_out_of_range_is_bad_input() {
    let dir = TempDir::new().unwrap();
    let state = plus_state(dir.path());
    let out = run(&["coherence", "--state", state.to_str().unwrap(), "--measure", "cq", "--q", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("q out of range"));
}

#[test]
fn malformed_and_invalid_states() {
    let dir = TempDir::new().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"dim\": 2, \"re\": [[1]]}").unwrap();
    let out = run(&["coherence", "--state", garbage.to_str().unwrap(), "--measure", "l1"]);
    assert_eq!(code(&out), 2);

    // well-formed but not positive semidefinite
    let negative = write_state(dir.path(), "neg.json", &[[1.2, 0.0], [0.0, -0.2]], &ZERO);
    let out = run(&["coherence", "--state", negative.to_str().unwrap(), "--measure", "l1"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["coherence", "--state", missing.to_str().unwrap(), "--measure", "l1"])), 2);
}

#[test]
fn unreachable_tolerance_reports_non_convergence() {
    let dir = TempDir::new().unwrap();
    let state = write_state(dir.path(), "mixed.json", &[[0.6, 0.2], [0.2, 0.4]], &[[0.0, -0.1], [0.1, 0.0]]);
    let out = run(&["--tol", "1e-300", "coherence", "--state", state.to_str().unwrap(), "--measure", "cq", "--q", "0.4"]);
    assert_eq!(code(&out), 4);
    let v = stdout_json(&out);
    assert_eq!(v["converged"], false);
    assert!(v["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let state = plus_state(dir.path());
    let out = run(&["sweep", "--state", state.to_str().unwrap(), "--measure", "cq", "--sweep", "0.1:0.9:9"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version=1"));
    let body = lines.collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    for (k, row) in rows.iter().enumerate() {
        let q: f64 = row[0].parse().unwrap();
        assert!((q - 0.1 * (k + 1) as f64).abs() < 1e-12);
        let expected = (2f64.powf((q - 1.0) / q) - 1.0) / (q - 1.0);
        assert!((row[1].parse::<f64>().unwrap() - expected).abs() < 1e-6, "q={q}");
    }
}

#[test]
fn sweep_edge_cases() {
    let dir = TempDir::new().unwrap();
    let plus = plus_state(dir.path());
    let out = run(&["--format", "json", "sweep", "--state", plus.to_str().unwrap(), "--measure", "cq", "--sweep", "0.3:0.9:1"]);
    assert_eq!(code(&out), 0);
    let rows = stdout_json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["q"].as_f64(), Some(0.3));

    let diag = write_state(dir.path(), "diag.json", &[[0.5, 0.0], [0.0, 0.5]], &ZERO);
    let out = run(&["--format", "json", "sweep", "--state", diag.to_str().unwrap(), "--measure", "cq", "--sweep", "0.2:0.8:4"]);
    for row in stdout_json(&out)["rows"].as_array().unwrap() {
        assert!(row["value"].as_f64().unwrap().abs() < 1e-8);
    }

    assert_eq!(code(&run(&["sweep", "--state", plus.to_str().unwrap(), "--measure", "cq", "--sweep", "0.5:1.5:3"])), 2);
}

#[test]
fn verify_with_zero_trials_passes_vacuously() {
    let out = run(&["verify", "--trials", "0"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["overall"], "pass");
    for suite in v["suites"].as_array().unwrap() {
        assert_eq!(suite["trials"], 0);
        assert_eq!(suite["passes"], 0);
    }
}

#[test]
fn injected_fault_fails_verification() {
    let out = run(&["verify", "--trials", "3", "--d", "2", "--inject-fault"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("channel-completeness"));
    assert_eq!(stdout_json(&out)["overall"], "fail");
}

#[test]
fn search_refuses_c_q() {
    let out = run(&["search-violation", "--measure", "cq", "--q", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("refuses"));
}

#[test]
fn search_with_zero_trials() {
    let out = run(&["search-violation", "--measure", "tsallis-alpha", "--q", "0.5", "--trials", "0"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"], "not found in 0 trials");
    assert_eq!(v["found"], false);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let search = ["--seed", "7", "search-violation", "--measure", "tsallis-alpha", "--d", "2", "--q", "0.5", "--trials", "5000"];
    assert_eq!(run(&search).stdout, run(&search).stdout);

    let verify = ["--seed", "3", "verify", "--trials", "4"];
    assert_eq!(run(&verify).stdout, run(&verify).stdout);

    let state = write_state(dir.path(), "mixed.json", &[[0.6, 0.2], [0.2, 0.4]], &[[0.0, -0.1], [0.1, 0.0]]);
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let args = ["--out", out.to_str().unwrap(), "sweep", "--state", state.to_str().unwrap(), "--measure", "cg", "--sweep", "0.5:0.5:1"];
        assert_eq!(code(&run(&args)), 0);
    }
    assert_eq!(std::fs::read(out_a).unwrap(), std::fs::read(out_b).unwrap());
}

#[test]
fn max_coherent_reports_closed_form() {
    let out = run(&["max-coherent", "--d", "3", "--q", "0.5"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out)["c_q_max"].as_f64().unwrap();
    assert!((v - (3f64.powf(-1.0) - 1.0) / -0.5).abs() < 1e-12);
}
