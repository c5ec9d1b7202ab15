//! End-to-end checks of the installed binary: exit codes, file
//! round-trips, and report artifacts.

use std::path::Path;
use std::process::Command;

fn sympt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sympt"))
}

fn run_search(out: &Path, runs: usize, seed: u64) {
    let status = sympt()
        .args([
            "search",
            "--qubits",
            "4",
            "--runs",
            &runs.to_string(),
            "--seed",
            &seed.to_string(),
            "--jobs",
            "2",
            "--out",
        ])
        .arg(out)
        .status()
        .expect("spawn sympt");
    assert!(status.success());
}

#[test]
fn search_writes_reports_and_states() {
    let dir = tempfile::tempdir().unwrap();
    run_search(dir.path(), 40, 7);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("run_index,seed,n_steps,terminal_profile,extremal,verdict,wall_ms"));
    assert_eq!(csv.lines().count(), 41);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(json["runs"], 40);
    assert_eq!(json["n_qubits"], 4);
}

#[test]
fn classify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    run_search(dir.path(), 40, 7);

    // an extremal entangled state file must exist for this seed
    let state = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .find(|p| {
            p.file_name()
                .unwrap()
                .to_string_lossy()
                .starts_with("state_run")
        })
        .expect("an extremal state was saved");
    let status = sympt().arg("classify").arg(&state).status().unwrap();
    assert_eq!(status.code(), Some(1), "candidate-entangled exits 1");

    // a separable two-term mixture exits 0
    let sep_path = dir.path().join("separable.json");
    let zero = sympt_core::dicke::ProductVector::from_alpha(num_complex::Complex64::new(0.0, 0.0));
    let one = sympt_core::dicke::ProductVector::pole();
    let mix = sympt_core::dicke::SymmetricState::mixture(4, &[(0.5, zero), (0.5, one)]).unwrap();
    sympt_cli::statefile::save_state(&sep_path, &mix, 1e-8).unwrap();
    let output = sympt().arg("classify").arg(&sep_path).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "separable exits 0");
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("separable"));

    // malformed file exits 64
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format\": \"nope\"}").unwrap();
    let status = sympt().arg("classify").arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(64), "parse failure exits 64");
}

#[test]
fn classify_json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    run_search(dir.path(), 40, 7);
    let state = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .find(|p| {
            p.file_name()
                .unwrap()
                .to_string_lossy()
                .starts_with("state_run")
        })
        .unwrap();
    let output = sympt()
        .arg("classify")
        .arg(&state)
        .arg("--json")
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(json["rank_profile"], "5-7-8");
    assert_eq!(json["verdict"], "candidate-entangled");
    assert_eq!(json["schmidt_bound"], 2);
    assert_eq!(json["product_vector_found"], false);
}

#[test]
fn classify_npt_state_is_entangled_not_separable() {
    // a pure Dicke state has rank one, which would trip the low-rank
    // separability rule; the failed PPT test must win
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dicke.json");
    let dicke = sympt_core::dicke::SymmetricState::pure_dicke(4, 2).unwrap();
    sympt_cli::statefile::save_state(&path, &dicke, 1e-8).unwrap();
    let output = sympt()
        .arg("classify")
        .arg(&path)
        .arg("--json")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(json["is_ppt"], false);
    assert_eq!(json["verdict"], "candidate-entangled");
}

#[test]
fn search_accepts_target_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let status = sympt()
        .args([
            "search",
            "--qubits",
            "4",
            "--runs",
            "3",
            "--seed",
            "5",
            "--jobs",
            "1",
            "--target-ranks",
            "5,8,8",
            "--out",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn oracle_check_passes() {
    let output = sympt()
        .args(["oracle-check", "--max-qubits", "5", "--states", "10"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("overall: PASS"));
}

#[test]
fn env_var_overrides_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    run_search(dir.path(), 5, 3);
    let state = dir.path().join("separable.json");
    let e = sympt_core::dicke::ProductVector::from_alpha(num_complex::Complex64::new(0.4, 0.1));
    let s = sympt_core::dicke::SymmetricState::pure_product(4, &e);
    sympt_cli::statefile::save_state(&state, &s, 1e-8).unwrap();
    let output = sympt()
        .env("SYMPT_DEFAULT_TOL", "1e-6")
        .args(["search", "--qubits", "4", "--runs", "1", "--seed", "1"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("rank tol 1.0e-6"), "summary was: {text}");
}
