//! End-to-end tomography pipeline: simulate mean-value measurements
//! ⟨Q_i⟩_{t_j} = Tr(Q_i ρ(t_j)), assemble the linear measurement frame via
//! the Heisenberg picture, solve for ρ(0) by minimum-norm least squares,
//! and project the solution back onto the density-matrix cone.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dynamics::{DensityMatrix, GklsGenerator};
use crate::error::{Error, Result};
use crate::hermdecomp::GeneralizedObservable;
use crate::linalg::{eigh, least_squares_min_norm};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::observability::ObservableSet;
use crate::scalar::{lit, Scalar, C};
use crate::tol::{self, RankTolerance};

/// How a grid was produced; kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    Uniform,
    Explicit,
}

/// Strictly increasing measurement times t_1 < … < t_g.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid<F: Scalar> {
    times: Vec<F>,
    mode: GridMode,
}

impl<F: Scalar> TimeGrid<F> {
    /// Uniform grid t_j = j·T/g for j = 1..g. Zero is excluded by default;
    /// `include_zero` prepends it as an extra point.
    pub fn uniform(horizon: F, count: usize, include_zero: bool) -> Result<Self> {
        if !(horizon.is_finite() && horizon > F::zero()) {
            return Err(Error::InvalidTimeGrid {
                reason: "horizon must be positive and finite".into(),
            });
        }
        if count == 0 {
            return Err(Error::InvalidTimeGrid {
                reason: "at least one time instant is required".into(),
            });
        }
        let g = lit::<F>(count as f64);
        let mut times = Vec::with_capacity(count + usize::from(include_zero));
        if include_zero {
            times.push(F::zero());
        }
        for j in 1..=count {
            times.push(horizon * lit::<F>(j as f64) / g);
        }
        Ok(TimeGrid {
            times,
            mode: GridMode::Uniform,
        })
    }

    /// Explicit times: validated finite and nonnegative, then sorted;
    /// duplicates are rejected.
    pub fn explicit(mut times: Vec<F>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidTimeGrid {
                reason: "at least one time instant is required".into(),
            });
        }
        if times.iter().any(|t| !t.is_finite() || *t < F::zero()) {
            return Err(Error::InvalidTimeGrid {
                reason: "times must be finite and nonnegative".into(),
            });
        }
        times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
        if times.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTimeGrid {
                reason: "duplicate time instants".into(),
            });
        }
        Ok(TimeGrid {
            times,
            mode: GridMode::Explicit,
        })
    }

    #[inline]
    pub fn times(&self) -> &[F] {
        &self.times
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    #[inline]
    pub fn mode(&self) -> GridMode {
        self.mode
    }
}

/// Gaussian noise on mean values: the statistical model of averaging a
/// finite ensemble. Each record's perturbation is a pure function of
/// (seed, observable index, time index), so simulation order is irrelevant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<F: Scalar> {
    pub std: F,
    pub seed: u64,
}

impl<F: Scalar> NoiseModel<F> {
    pub fn new(std: F, seed: u64) -> Result<Self> {
        if !(std.is_finite() && std >= F::zero()) {
            return Err(Error::InvalidInput {
                reason: "noise standard deviation must be finite and ≥ 0".into(),
            });
        }
        Ok(NoiseModel { std, seed })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            std: F::zero(),
            seed: 0,
        }
    }
}

impl<F: Scalar> Default for NoiseModel<F> {
    fn default() -> Self {
        Self::noiseless()
    }
}

/// Deterministic per-record Gaussian draw keyed by (seed, i, j).
fn record_noise<F: Scalar>(seed: u64, i: usize, j: usize) -> F {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((i as u64) << 32) ^ (j as u64));
    lit(rng.sample::<f64, _>(StandardNormal))
}

/// One datum ⟨Q_i⟩_{t_j}: the imaginary part is zero for Hermitian-sourced
/// records and carries the second channel for generalized observables.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord<F: Scalar> {
    pub observable_index: usize,
    pub time_index: usize,
    pub time: F,
    pub value: C<F>,
    pub noise_std: F,
    pub seed_tag: u64,
}

/// Exact mean values Tr(Q_i · e^{𝕃 t_j} ρ0) plus independent Gaussian
/// perturbations of the given standard deviation.
pub fn simulate_measurements<F: Scalar>(
    gen: &GklsGenerator<F>,
    rho0: &DensityMatrix<F>,
    set: &ObservableSet<F>,
    grid: &TimeGrid<F>,
    noise: NoiseModel<F>,
) -> Result<Vec<MeasurementRecord<F>>> {
    if set.dim() != gen.dim() || rho0.dim() != gen.dim() {
        return Err(Error::dim_mismatch(
            "simulate_measurements",
            (gen.dim(), gen.dim()),
            (set.dim(), rho0.dim()),
        ));
    }
    let mut records = Vec::with_capacity(set.len() * grid.len());
    for (j, &t) in grid.times().iter().enumerate() {
        let state = gen.propagate_state(rho0, t)?;
        for (i, q) in set.observables().iter().enumerate() {
            let exact = q.matrix().trace_product(&state.matrix)?.re;
            let value = exact
                + if noise.std > F::zero() {
                    noise.std * record_noise::<F>(noise.seed, i, j)
                } else {
                    F::zero()
                };
            records.push(MeasurementRecord {
                observable_index: i,
                time_index: j,
                time: t,
                value: Complex::new(value, F::zero()),
                noise_std: noise.std,
                seed_tag: noise.seed,
            });
        }
    }
    Ok(records)
}

/// Complex mean values ⟨A⟩_t = ⟨Q₁⟩_t + i⟨Q₂⟩_t for a generalized
/// observable; the two real channels are independently noisy.
pub fn simulate_complex_measurements<F: Scalar>(
    gen: &GklsGenerator<F>,
    rho0: &DensityMatrix<F>,
    a: &GeneralizedObservable<F>,
    grid: &TimeGrid<F>,
    noise: NoiseModel<F>,
) -> Result<Vec<MeasurementRecord<F>>> {
    if a.dim() != gen.dim() || rho0.dim() != gen.dim() {
        return Err(Error::dim_mismatch(
            "simulate_complex_measurements",
            (gen.dim(), gen.dim()),
            (a.dim(), rho0.dim()),
        ));
    }
    let mut records = Vec::with_capacity(grid.len());
    for (j, &t) in grid.times().iter().enumerate() {
        let state = gen.propagate_state(rho0, t)?;
        let re = a.real_part().matrix().trace_product(&state.matrix)?.re;
        let im = a.imag_part().matrix().trace_product(&state.matrix)?.re;
        let (re, im) = if noise.std > F::zero() {
            (
                re + noise.std * record_noise::<F>(noise.seed, 0, j),
                im + noise.std * record_noise::<F>(noise.seed, 1, j),
            )
        } else {
            (re, im)
        };
        records.push(MeasurementRecord {
            observable_index: 0,
            time_index: j,
            time: t,
            value: Complex::new(re, im),
            noise_std: noise.std,
            seed_tag: noise.seed,
        });
    }
    Ok(records)
}

/// Split complex-valued records into their two real channels, assigning
/// the given observable indices; inverse of the pairing done by
/// [`simulate_complex_measurements`].
pub fn split_complex_records<F: Scalar>(
    records: &[MeasurementRecord<F>],
    re_index: usize,
    im_index: usize,
) -> Vec<MeasurementRecord<F>> {
    let mut out = Vec::with_capacity(records.len() * 2);
    for r in records {
        out.push(MeasurementRecord {
            observable_index: re_index,
            value: Complex::new(r.value.re, F::zero()),
            ..r.clone()
        });
        out.push(MeasurementRecord {
            observable_index: im_index,
            value: Complex::new(r.value.im, F::zero()),
            ..r.clone()
        });
    }
    out
}

/// Identity of one frame row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameRow {
    /// Measurement of observable `observable_index` at grid point
    /// `time_index`.
    Observable {
        observable_index: usize,
        time_index: usize,
    },
    /// The unit-trace datum Tr ρ = 1.
    Trace,
}

/// Linear map from vec(ρ0) to the expected data vector: row (i, j) is the
/// conjugated vectorization of the Heisenberg-evolved observable Q_i(t_j),
/// since Tr(Q ρ(t)) = ⟨Q(t), ρ(0)⟩ in the Hilbert–Schmidt geometry.
#[derive(Debug, Clone)]
pub struct MeasurementFrame<F: Scalar> {
    pub matrix: ComplexMatrix<F>,
    pub row_map: Vec<FrameRow>,
    dim: usize,
}

impl<F: Scalar> MeasurementFrame<F> {
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }
}

/// Build the measurement frame; `trace_row` appends the unit-trace row,
/// mirroring the `identity_augmented` option of the spanning test.
pub fn assemble_frame<F: Scalar>(
    gen: &GklsGenerator<F>,
    set: &ObservableSet<F>,
    grid: &TimeGrid<F>,
    trace_row: bool,
) -> Result<MeasurementFrame<F>> {
    if set.dim() != gen.dim() {
        return Err(Error::dim_mismatch(
            "assemble_frame",
            (gen.dim(), gen.dim()),
            (set.dim(), set.dim()),
        ));
    }
    let n = gen.dim();
    let mut rows = Vec::with_capacity(set.len() * grid.len() + usize::from(trace_row));
    let mut row_map = Vec::with_capacity(rows.capacity());

    for (i, q) in set.observables().iter().enumerate() {
        for (j, &t) in grid.times().iter().enumerate() {
            let evolved = gen.propagate_observable(q, t)?;
            let row: Vec<C<F>> = evolved
                .matrix()
                .vectorize()?
                .into_iter()
                .map(|z| z.conj())
                .collect();
            rows.push(row);
            row_map.push(FrameRow::Observable {
                observable_index: i,
                time_index: j,
            });
        }
    }
    if trace_row {
        let row: Vec<C<F>> = ComplexMatrix::<F>::identity(n)
            .vectorize()?
            .into_iter()
            .map(|z| z.conj())
            .collect();
        rows.push(row);
        row_map.push(FrameRow::Trace);
    }

    Ok(MeasurementFrame {
        matrix: ComplexMatrix::from_stacked_rows(&rows)?,
        row_map,
        dim: n,
    })
}

/// Reconstruction output: the projected state plus the raw least-squares
/// diagnostics needed to judge it.
#[derive(Debug, Clone)]
pub struct ReconstructionResult<F: Scalar> {
    pub rho_hat: DensityMatrix<F>,
    pub raw_solution: ComplexMatrix<F>,
    pub residual_norm: F,
    /// σ_max/σ_min of the frame; infinite when the frame is column-rank
    /// deficient.
    pub frame_condition_number: F,
    pub frame_rank: usize,
    /// Whether projection moved the raw solution (it failed one of the
    /// density-matrix requirements).
    pub projected: bool,
}

/// Minimum-norm least squares on frame·vec(ρ) = values, followed by
/// projection onto the density cone. A rank-deficient frame still returns
/// a result; `frame_rank` tells the caller to distrust it.
pub fn reconstruct<F: Scalar>(
    records: &[MeasurementRecord<F>],
    frame: &MeasurementFrame<F>,
    rank_tol: RankTolerance,
) -> Result<ReconstructionResult<F>> {
    let n = frame.dim();
    let expected_data_rows = frame
        .row_map
        .iter()
        .filter(|r| matches!(r, FrameRow::Observable { .. }))
        .count();
    if records.len() != expected_data_rows {
        return Err(Error::RecordMismatch {
            reason: format!(
                "{} records for {} frame data rows",
                records.len(),
                expected_data_rows
            ),
        });
    }

    let mut values = Vec::with_capacity(frame.row_map.len());
    for row in &frame.row_map {
        match row {
            FrameRow::Observable {
                observable_index,
                time_index,
            } => {
                let mut found = None;
                for r in records {
                    if r.observable_index == *observable_index && r.time_index == *time_index {
                        if found.is_some() {
                            return Err(Error::RecordMismatch {
                                reason: format!(
                                    "duplicate record for observable {observable_index} at time index {time_index}"
                                ),
                            });
                        }
                        found = Some(r.value);
                    }
                }
                let Some(v) = found else {
                    return Err(Error::RecordMismatch {
                        reason: format!(
                            "missing record for observable {observable_index} at time index {time_index}"
                        ),
                    });
                };
                values.push(v);
            }
            FrameRow::Trace => values.push(Complex::new(F::one(), F::zero())),
        }
    }

    let ls = least_squares_min_norm(&frame.matrix, &values, rank_tol)?;
    let raw_solution = ComplexMatrix::devectorize(&ls.solution)?;
    let rho_hat = project_to_density(&raw_solution)?;

    let projected = raw_solution.hermiticity_deviation() > tol::scaled(tol::HERMITICITY)
        || (raw_solution.trace().re - F::one()).abs() > tol::scaled(tol::DENSITY_TRACE)
        || raw_solution.trace().im.abs() > tol::scaled(tol::DENSITY_TRACE)
        || {
            let min_eig = eigh(
                &crate::hermdecomp::HermitianObservable::force_hermitize(&raw_solution)?
                    .into_matrix(),
            )?
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(F::zero());
            min_eig < -tol::scaled::<F>(tol::DENSITY_EIGENVALUE)
        };

    debug_assert_eq!(frame.matrix.cols(), n * n);
    Ok(ReconstructionResult {
        rho_hat,
        raw_solution,
        residual_norm: ls.residual_norm,
        frame_condition_number: ls.condition_number,
        frame_rank: ls.rank,
        projected,
    })
}

/// Hilbert–Schmidt-nearest density matrix to the hermitized input:
/// hermitize, eigendecompose, project the spectrum onto the probability
/// simplex, reassemble. Idempotent.
pub fn project_to_density<F: Scalar>(m: &ComplexMatrix<F>) -> Result<DensityMatrix<F>> {
    let n = m.require_square()?;
    if n == 0 {
        return Err(Error::InvalidInput {
            reason: "cannot project an empty matrix".into(),
        });
    }
    let herm = crate::hermdecomp::HermitianObservable::force_hermitize(m)?.into_matrix();
    let dec = eigh(&herm)?;

    // Euclidean projection of the eigenvalue vector onto the simplex
    // {p : p ≥ 0, Σp = 1}.
    let mut sorted = dec.eigenvalues.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let mut cumulative = F::zero();
    let mut theta = F::zero();
    let mut support = 0usize;
    for (k, &lam) in sorted.iter().enumerate() {
        cumulative = cumulative + lam;
        let candidate = (cumulative - F::one()) / lit::<F>((k + 1) as f64);
        if lam - candidate > F::zero() {
            theta = candidate;
            support = k + 1;
        }
    }
    debug_assert!(support >= 1);

    let clipped: Vec<F> = dec
        .eigenvalues
        .iter()
        .map(|&lam| (lam - theta).max(F::zero()))
        .collect();

    let v = &dec.eigenvectors;
    let projected = ComplexMatrix::from_fn(n, n, |r, c| {
        let mut acc = Complex::new(F::zero(), F::zero());
        for k in 0..n {
            if clipped[k] > F::zero() {
                acc = acc + v.get(r, k) * v.get(c, k).conj().scale(clipped[k]);
            }
        }
        acc
    });
    // Exact hermitization: accumulate order differs across the diagonal.
    let projected = crate::hermdecomp::HermitianObservable::force_hermitize(&projected)?
        .into_matrix();
    DensityMatrix::new(projected)
}

/// Uhlmann fidelity (Tr √(√ρ σ √ρ))², clamped to [0, 1].
pub fn fidelity<F: Scalar>(rho: &DensityMatrix<F>, sigma: &DensityMatrix<F>) -> Result<F> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(
            "fidelity",
            (rho.dim(), rho.dim()),
            (sigma.dim(), sigma.dim()),
        ));
    }
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let middle = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let herm = crate::hermdecomp::HermitianObservable::force_hermitize(&middle)?.into_matrix();
    let eigs = eigh(&herm)?.eigenvalues;
    let root_sum: F = eigs
        .iter()
        .map(|&lam| lam.max(F::zero()).sqrt())
        .fold(F::zero(), |a, b| a + b);
    Ok((root_sum * root_sum).min(F::one()).max(F::zero()))
}

/// Trace distance ½‖ρ − σ‖₁, clamped to [0, 1].
pub fn trace_distance<F: Scalar>(rho: &DensityMatrix<F>, sigma: &DensityMatrix<F>) -> Result<F> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(
            "trace_distance",
            (rho.dim(), rho.dim()),
            (sigma.dim(), sigma.dim()),
        ));
    }
    let diff = rho.matrix() - sigma.matrix();
    let eigs = eigh(&diff)?.eigenvalues;
    let half_abs_sum = eigs
        .iter()
        .map(|&lam| lam.abs())
        .fold(F::zero(), |a, b| a + b)
        * lit::<F>(0.5);
    Ok(half_abs_sum.min(F::one()).max(F::zero()))
}

/// Hilbert–Schmidt distance between a reconstructed matrix and a reference
/// state; the pipeline's headline error metric.
pub fn hs_distance<F: Scalar>(a: &ComplexMatrix<F>, b: &ComplexMatrix<F>) -> F {
    let diff = a - b;
    diff.hs_norm()
}

fn psd_sqrt<F: Scalar>(m: &ComplexMatrix<F>) -> Result<ComplexMatrix<F>> {
    let n = m.rows();
    let dec = eigh(m)?;
    let v = &dec.eigenvectors;
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let mut acc = Complex::new(F::zero(), F::zero());
        for k in 0..n {
            let lam = dec.eigenvalues[k].max(F::zero()).sqrt();
            acc = acc + v.get(r, k) * v.get(c, k).conj().scale(lam);
        }
        acc
    }))
}

/// Residual of a vectorized observable against an orthonormal Hermitian
/// pool; used to confirm that frame rows stay inside the pooled Krylov
/// span for non-reconstructible setups.
pub fn span_containment_residual<F: Scalar>(
    element: &ComplexMatrix<F>,
    orthonormal_pool: &[crate::hermdecomp::HermitianObservable<F>],
) -> Result<F> {
    let norm = element.hs_norm();
    if norm == F::zero() {
        return Ok(F::zero());
    }
    let unit = element.scale_re(F::one() / norm);
    let mut residual = unit.vectorize()?;
    for b in orthonormal_pool {
        let coeff = b.matrix().hs_inner(&unit)?;
        let bvec = b.matrix().vectorize()?;
        for (r, bv) in residual.iter_mut().zip(bvec.iter()) {
            *r = *r - coeff * *bv;
        }
    }
    Ok(vec_norm(&residual))
}
