//! End-to-end CLI tests: exit-code protocol, JSON output, determinism, and
//! parity with direct library calls on the shipped configurations.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qstrobe_core::io;
use qstrobe_core::pipeline::{run_check, run_roundtrip};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qstrobe"))
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

#[test]
fn check_reconstructible_demo_exits_zero() {
    let cfg = config_dir().join("qubit_demo.json");
    let out = run(&["check", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["verdict"], "reconstructible");
    assert_eq!(v["report"]["mu"], 3);
    assert_eq!(v["report"]["total_span_dim"], 4);
    assert_eq!(v["report"]["target_dim"], 4);
}

#[test]
fn check_insufficient_set_exits_two() {
    let cfg = config_dir().join("qubit_sigma_x.json");
    let out = run(&["check", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["verdict"], "not_reconstructible");
    assert_eq!(v["report"]["total_span_dim"], 2);
    assert!(v["report"]["missing_direction"].is_object());
}

#[test]
fn check_identity_augmented_flag_overrides_config() {
    // σ_x alone stays insufficient even with the trace row: exit stays 2,
    // but the span gains the identity direction.
    let cfg = config_dir().join("qubit_sigma_x.json");
    let out = run(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--identity-augmented",
        "true",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["total_span_dim"], 3);
    assert_eq!(v["report"]["identity_augmented"], true);
}

#[test]
fn tol_flag_overrides_config_and_is_echoed() {
    let cfg = config_dir().join("qubit_demo.json");
    let out = run(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--tol",
        "1e-6",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["tolerance_used"], 1e-6);

    // Invalid tolerances are input errors.
    let out = run(&["check", "--config", cfg.to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ this is not json").unwrap();
    let out = run(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line"), "diagnostics should carry a position: {msg}");

    // Non-square observable matrix is an input error as well.
    let non_square = dir.path().join("non_square.json");
    std::fs::write(
        &non_square,
        r#"{
            "generator": {"dim": 2, "hamiltonian": {"rows": 2, "cols": 2,
                "data": [[[1,0],[0,0]],[[0,0],[-1,0]]]}},
            "observables": [{"rows": 1, "cols": 2, "data": [[[1,0],[0,0]]]}]
        }"#,
    )
    .unwrap();
    let out = run(&["check", "--config", non_square.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // Unknown flags are input errors, not clap's default exit 2.
    let out = run(&["check", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn roundtrip_demo_exits_zero_with_tight_error() {
    let cfg = config_dir().join("qubit_demo.json");
    let out = run(&["roundtrip", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["hs_error"].as_f64().unwrap() <= 1e-8);
    assert!(v["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert_eq!(v["reconstruction"]["frame_rank"], 4);
    assert_eq!(v["quality_gate"], true);
}

#[test]
fn roundtrip_degenerate_grid_exits_three() {
    let cfg = config_dir().join("qubit_degenerate.json");
    let out = run(&["roundtrip", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["reconstruction"]["frame_rank"], 3);
    assert!(v["hs_error"].as_f64().unwrap() > 1e-8);
    // Rank-deficient frame: the condition number is absent (exact zero
    // singular value) or astronomically large (rounding-level one).
    let cond = v["reconstruction"]["frame_condition_number"].as_f64();
    assert!(cond.is_none_or(|c| c > 1e12), "cond = {cond:?}");
}

#[test]
fn roundtrip_missing_rho0_exits_one() {
    let cfg = config_dir().join("qubit_sigma_x.json");
    let out = run(&["roundtrip", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn roundtrip_noisy_reports_conditioning_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config_dir().join("qubit_demo.json")).unwrap();
    let noisy = text.replace(r#""std": 0.0"#, r#""std": 1e-3"#);
    assert_ne!(noisy, text);
    let path = dir.path().join("noisy.json");
    std::fs::write(&path, noisy).unwrap();

    let out = run(&["roundtrip", "--config", path.to_str().unwrap(), "--json", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["reconstruction"]["frame_condition_number"].as_f64().unwrap() <= 50.0);
    assert!(v["trace_distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn complex_observable_config_reports_channels() {
    let cfg = config_dir().join("qubit_complex_observable.json");
    let out = run(&["roundtrip", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let notices = v["channel_notices"].as_array().unwrap();
    assert_eq!(notices.len(), 1);
    assert!(notices[0].as_str().unwrap().contains("Q1.re"));
    // Both channels measured at every grid point.
    assert_eq!(v["records"].as_array().unwrap().len(), 6);
}

#[test]
fn decompose_matches_library_and_handles_errors() {
    let matrix_path = config_dir().join("matrix_upper_shift.json");
    let out = run(&["decompose", matrix_path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["q"]["data"][0][1][0], 0.5);
    assert_eq!(v["r"]["data"][0][1][1], -0.5);
    assert_eq!(v["recomposition_error"], 0.0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("rect.json");
    std::fs::write(&bad, r#"{"rows":1,"cols":2,"data":[[[1,0],[0,0]]]}"#).unwrap();
    let out = run(&["decompose", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn demo_runs_and_is_deterministic() {
    let a = run(&["demo", "--json", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&["demo", "--json", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout, "same seed must give byte-identical output");

    let v = stdout_json(&a);
    let scenarios = v["scenarios"].as_array().unwrap();
    assert_eq!(scenarios[0]["observables_used"], 1);
    assert_eq!(scenarios[0]["static_observables"], 3);
    assert_eq!(scenarios[1]["observables_used"], 2);
    assert_eq!(scenarios[1]["static_observables"], 15);
    for s in scenarios {
        assert!(s["hs_error"].as_f64().unwrap() <= 1e-8);
        assert_eq!(s["reconstructible"], true);
    }
}

#[test]
fn out_flag_writes_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let cfg = config_dir().join("qubit_demo.json");
    let out = run(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--json",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let file_text = std::fs::read_to_string(&report).unwrap();
    let stdout_text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout_text.trim_end(), file_text.trim_end());
}

#[test]
fn cli_numbers_match_direct_library_calls() {
    // The CLI must be a thin shell over the library: same config, same
    // numbers, for both the check and the round trip.
    for name in ["qubit_demo.json", "four_level_demo.json"] {
        let path = config_dir().join(name);
        let config = io::load_config(&path).unwrap();
        let report = run_check(&config).unwrap();
        let outcome = run_roundtrip(&config).unwrap();

        let out = run(&["check", "--config", path.to_str().unwrap(), "--json"]);
        let v = stdout_json(&out);
        assert_eq!(v["report"]["mu"].as_u64().unwrap() as usize, report.mu);
        assert_eq!(
            v["report"]["total_span_dim"].as_u64().unwrap() as usize,
            report.total_span_dim
        );

        let out = run(&["roundtrip", "--config", path.to_str().unwrap(), "--json"]);
        let v = stdout_json(&out);
        assert_eq!(v["hs_error"].as_f64().unwrap(), outcome.hs_error);
        assert_eq!(
            v["reconstruction"]["residual_norm"].as_f64().unwrap(),
            outcome.result.residual_norm
        );
        assert_eq!(
            v["reconstruction"]["frame_rank"].as_u64().unwrap() as usize,
            outcome.result.frame_rank
        );
    }
}
