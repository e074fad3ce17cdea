//! `qstrobe`: reconstructibility checks, Hermitian decomposition, and
//! simulate → reconstruct round trips from JSON problem configurations.
//!
//! Exit codes: 0 success, 1 input error, 2 not reconstructible,
//! 3 reconstruction-quality failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qstrobe_core::demo::{run_demo, DemoReport};
use qstrobe_core::hermdecomp;
use qstrobe_core::io::{
    self, MatrixJson, ObservabilityReportJson, ProblemConfig, RecordJson,
    ReconstructionResultJson,
};
use qstrobe_core::pipeline::{
    roundtrip_passes, run_check, run_roundtrip, static_observable_count, RoundtripOutcome,
};
use qstrobe_core::{ComplexMatrix64, RankTolerance};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NOT_RECONSTRUCTIBLE: u8 = 2;
const EXIT_QUALITY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qstrobe",
    version,
    about = "Stroboscopic quantum tomography: observability checks and state reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Emit the machine-readable JSON report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide reconstructibility of a configured problem.
    Check {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Override the rank tolerance from the configuration.
        #[arg(long, value_name = "REAL")]
        tol: Option<f64>,
        /// Override identity augmentation from the configuration.
        #[arg(long, value_name = "BOOL")]
        identity_augmented: Option<bool>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Simulate measurements and reconstruct the initial state.
    Roundtrip {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long, value_name = "REAL")]
        tol: Option<f64>,
        #[arg(long, value_name = "BOOL")]
        identity_augmented: Option<bool>,
        /// Override the noise seed from the configuration.
        #[arg(long, value_name = "INT")]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Split a complex matrix file into its Hermitian pair A = Q + iR.
    Decompose {
        /// Matrix file in the shared JSON format.
        matrix: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the built-in comparison against single-time-instant tomography.
    Demo {
        /// Noise seed (the built-in scenarios are noiseless, so this only
        /// pins determinism).
        #[arg(long, value_name = "INT", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land here with benign "error" kinds.
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign {
                ExitCode::from(EXIT_OK)
            } else {
                ExitCode::from(EXIT_INPUT)
            };
        }
    };

    let code = match cli.command {
        Command::Check {
            config,
            tol,
            identity_augmented,
            common,
        } => cmd_check(&config, tol, identity_augmented, &common),
        Command::Roundtrip {
            config,
            tol,
            identity_augmented,
            seed,
            common,
        } => cmd_roundtrip(&config, tol, identity_augmented, seed, &common),
        Command::Decompose { matrix, common } => cmd_decompose(&matrix, &common),
        Command::Demo { seed, common } => cmd_demo(seed, &common),
    };
    ExitCode::from(code.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        EXIT_INPUT
    }))
}

type CmdResult = Result<u8, String>;

fn load_config_with_overrides(
    path: &Path,
    tol: Option<f64>,
    identity_augmented: Option<bool>,
    seed: Option<u64>,
) -> Result<ProblemConfig, String> {
    let mut config = io::load_config(path).map_err(|e| e.to_string())?;
    if let Some(t) = tol {
        config.rank_tol = RankTolerance::new(t).map_err(|e| e.to_string())?;
    }
    if let Some(aug) = identity_augmented {
        config.identity_augmented = aug;
    }
    if let Some(s) = seed {
        config.noise.seed = s;
    }
    Ok(config)
}

fn emit(common: &CommonOpts, json_text: &str, render_text: impl FnOnce()) -> Result<(), String> {
    if common.json {
        println!("{json_text}");
    } else {
        render_text();
    }
    if let Some(path) = &common.out {
        std::fs::write(path, json_text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn channel_notice(config: &ProblemConfig) -> Vec<String> {
    config
        .expansions
        .iter()
        .map(|e| {
            format!(
                "observable {} is complex: measured as channels {} and {}",
                e.source_index + 1,
                config.set.labels()[e.re_index],
                config.set.labels()[e.im_index]
            )
        })
        .collect()
}

fn cmd_check(
    path: &Path,
    tol: Option<f64>,
    identity_augmented: Option<bool>,
    common: &CommonOpts,
) -> CmdResult {
    let config = load_config_with_overrides(path, tol, identity_augmented, None)?;
    let report = run_check(&config).map_err(|e| e.to_string())?;
    let json = serde_json::json!({
        "report": ObservabilityReportJson::from_report(&report),
        "labels": config.set.labels(),
        "channel_notices": channel_notice(&config),
    });
    let json_text = serde_json::to_string_pretty(&json).map_err(|e| e.to_string())?;

    emit(common, &json_text, || {
        for notice in channel_notice(&config) {
            println!("note: {notice}");
        }
        println!(
            "verdict: {}",
            if report.reconstructible() {
                "reconstructible"
            } else {
                "not reconstructible"
            }
        );
        println!("minimal polynomial degree (mu): {}", report.mu);
        if report.mu_ambiguous {
            println!("warning: mu rank decision was near the tolerance threshold");
        }
        for (label, dim) in config.set.labels().iter().zip(&report.per_observable_dims) {
            println!("  Krylov dim of {label}: {dim}");
        }
        println!(
            "total span: {} / {} (identity augmented: {})",
            report.total_span_dim, report.target_dim, report.identity_augmented
        );
        if let Some(w) = &report.missing_direction {
            println!("missing direction (unit HS norm):");
            print_matrix(w.matrix());
        }
    })?;
    Ok(if report.reconstructible() {
        EXIT_OK
    } else {
        EXIT_NOT_RECONSTRUCTIBLE
    })
}

fn cmd_roundtrip(
    path: &Path,
    tol: Option<f64>,
    identity_augmented: Option<bool>,
    seed: Option<u64>,
    common: &CommonOpts,
) -> CmdResult {
    let config = load_config_with_overrides(path, tol, identity_augmented, seed)?;
    let outcome = run_roundtrip(&config).map_err(|e| e.to_string())?;
    let passed = roundtrip_passes(&outcome);
    let json_text = serde_json::to_string_pretty(&roundtrip_json(&config, &outcome, passed))
        .map_err(|e| e.to_string())?;

    emit(common, &json_text, || {
        for notice in channel_notice(&config) {
            println!("note: {notice}");
        }
        let n_sq = outcome.result.rho_hat.dim().pow(2);
        println!(
            "verdict: {}",
            if outcome.observability.reconstructible() {
                "reconstructible"
            } else {
                "not reconstructible"
            }
        );
        println!(
            "frame: rank {} / {}, condition number {:.3e}",
            outcome.result.frame_rank, n_sq, outcome.result.frame_condition_number
        );
        if outcome.result.frame_rank < n_sq {
            println!("warning: rank-deficient frame; the reconstruction is not unique");
        }
        println!("records: {} (noise std {:.3e})", outcome.records.len(), outcome.noise_std);
        println!("residual norm: {:.3e}", outcome.result.residual_norm);
        println!("HS error vs rho0: {:.3e}", outcome.hs_error);
        println!("fidelity: {:.12}", outcome.fidelity);
        println!("trace distance: {:.3e}", outcome.trace_distance);
        println!("projected: {}", outcome.result.projected);
        println!("quality gate: {}", if passed { "pass" } else { "fail" });
    })?;
    Ok(if passed { EXIT_OK } else { EXIT_QUALITY })
}

fn roundtrip_json(
    config: &ProblemConfig,
    outcome: &RoundtripOutcome,
    passed: bool,
) -> serde_json::Value {
    serde_json::json!({
        "observability": ObservabilityReportJson::from_report(&outcome.observability),
        "reconstruction": ReconstructionResultJson::from_result(&outcome.result),
        "records": outcome.records.iter().map(RecordJson::from_record).collect::<Vec<_>>(),
        "times": outcome.grid.times(),
        "hs_error": outcome.hs_error,
        "fidelity": outcome.fidelity,
        "trace_distance": outcome.trace_distance,
        "noise_std": outcome.noise_std,
        "channel_notices": channel_notice(config),
        "quality_gate": passed,
    })
}

fn cmd_decompose(path: &Path, common: &CommonOpts) -> CmdResult {
    let matrix = io::load_matrix(path).map_err(|e| e.to_string())?;
    let (q, r) = hermdecomp::decompose(&matrix).map_err(|e| e.to_string())?;
    let recomposed = hermdecomp::recompose(&q, &r).map_err(|e| e.to_string())?;
    let recomposition_error = recomposed.max_diff(&matrix);

    let json = serde_json::json!({
        "q": MatrixJson::from_matrix(q.matrix()),
        "r": MatrixJson::from_matrix(r.matrix()),
        "recomposition_error": recomposition_error,
    });
    let json_text = serde_json::to_string_pretty(&json).map_err(|e| e.to_string())?;

    emit(common, &json_text, || {
        println!("Q (hermitian part):");
        print_matrix(q.matrix());
        println!("R (anti-hermitian part, A = Q + iR):");
        print_matrix(r.matrix());
        println!("recomposition max error: {recomposition_error:.3e}");
    })?;
    Ok(EXIT_OK)
}

fn cmd_demo(seed: u64, common: &CommonOpts) -> CmdResult {
    let report: DemoReport = run_demo(seed).map_err(|e| e.to_string())?;
    let json_text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;

    emit(common, &json_text, || {
        println!("stroboscopic vs single-time-instant observable counts");
        println!(
            "{:<30} {:>4} {:>10} {:>10} {:>4} {:>6} {:>12}",
            "scenario", "dim", "used", "static", "mu", "times", "HS error"
        );
        for s in &report.scenarios {
            println!(
                "{:<30} {:>4} {:>10} {:>10} {:>4} {:>6} {:>12.3e}",
                s.name,
                s.dim,
                s.observables_used,
                s.static_observables,
                s.mu,
                s.time_instants,
                s.hs_error
            );
        }
        let all_ok = report
            .scenarios
            .iter()
            .all(|s| s.reconstructible && s.hs_error <= 1e-8);
        println!(
            "all scenarios reconstructed exactly: {}",
            if all_ok { "yes" } else { "no" }
        );
    })?;

    let sanity = report
        .scenarios
        .iter()
        .all(|s| s.reconstructible && s.hs_error <= 1e-8);
    for s in &report.scenarios {
        debug_assert_eq!(s.static_observables, static_observable_count(s.dim));
    }
    Ok(if sanity { EXIT_OK } else { EXIT_QUALITY })
}

fn print_matrix(m: &ComplexMatrix64) {
    for r in 0..m.rows() {
        let mut line = String::from("  ");
        for c in 0..m.cols() {
            let z = m.get(r, c);
            line.push_str(&format!("{:>9.4}{:+.4}i  ", z.re, z.im));
        }
        println!("{line}");
    }
}
