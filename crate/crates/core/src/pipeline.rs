//! Orchestration over loaded problem configurations: the reconstructibility
//! check and the full simulate → reconstruct round trip, both at f64.

use crate::error::{Error, Result};
use crate::io::ProblemConfig;
use crate::observability::{reconstructibility_check, ObservabilityOptions, ObservabilityReport};
use crate::tomography::{
    assemble_frame, fidelity, hs_distance, reconstruct, simulate_measurements, trace_distance,
    MeasurementRecord, ReconstructionResult, TimeGrid,
};

/// Everything the round trip produces, for reporting and gating.
#[derive(Debug, Clone)]
pub struct RoundtripOutcome {
    pub observability: ObservabilityReport<f64>,
    pub grid: TimeGrid<f64>,
    pub records: Vec<MeasurementRecord<f64>>,
    pub result: ReconstructionResult<f64>,
    pub hs_error: f64,
    pub fidelity: f64,
    pub trace_distance: f64,
    pub noise_std: f64,
}

pub fn run_check(config: &ProblemConfig) -> Result<ObservabilityReport<f64>> {
    reconstructibility_check(
        &config.generator,
        &config.set,
        ObservabilityOptions {
            identity_augmented: config.identity_augmented,
            tol: config.rank_tol,
        },
    )
}

/// Simulate the configured measurements and reconstruct ρ(0).
///
/// When the configuration has no grid, a uniform grid with g = μ points on
/// [0, 1] is used; the reported conditioning tells the caller whether that
/// default aliased.
pub fn run_roundtrip(config: &ProblemConfig) -> Result<RoundtripOutcome> {
    let Some(rho0) = &config.rho0 else {
        return Err(Error::InvalidInput {
            reason: "roundtrip requires rho0 in the configuration".into(),
        });
    };
    let observability = run_check(config)?;
    let grid = match &config.grid {
        Some(g) => g.clone(),
        None => TimeGrid::uniform(1.0, observability.mu, false)?,
    };
    let frame = assemble_frame(
        &config.generator,
        &config.set,
        &grid,
        config.identity_augmented,
    )?;
    let records =
        simulate_measurements(&config.generator, rho0, &config.set, &grid, config.noise)?;
    let result = reconstruct(&records, &frame, config.rank_tol)?;

    let hs_error = hs_distance(result.rho_hat.matrix(), rho0.matrix());
    let fid = fidelity(&result.rho_hat, rho0)?;
    let dist = trace_distance(&result.rho_hat, rho0)?;
    Ok(RoundtripOutcome {
        observability,
        grid,
        records,
        result,
        hs_error,
        fidelity: fid,
        trace_distance: dist,
        noise_std: config.noise.std,
    })
}

/// Noiseless HS error the round trip must beat to count as exact.
pub const NOISELESS_ERROR_GATE: f64 = 1e-8;

/// Quality gate behind the round-trip exit code. Noiseless runs must
/// reproduce ρ(0) to [`NOISELESS_ERROR_GATE`]; noisy runs must keep the
/// frame at full rank with a residual consistent with the noise level.
pub fn roundtrip_passes(outcome: &RoundtripOutcome) -> bool {
    let n_sq = outcome.result.rho_hat.dim().pow(2);
    if outcome.noise_std == 0.0 {
        outcome.hs_error <= NOISELESS_ERROR_GATE
    } else {
        let rows = outcome.records.len() + usize::from(outcome.observability.identity_augmented);
        let residual_budget = 5.0 * outcome.noise_std * (rows as f64).sqrt() + 1e-8;
        outcome.result.frame_rank == n_sq && outcome.result.residual_norm <= residual_budget
    }
}

/// Reference observable count for single-time tomography, n² − 1.
pub fn static_observable_count(dim: usize) -> usize {
    dim * dim - 1
}
