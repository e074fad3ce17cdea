//! Stroboscopic reconstructibility analysis: Krylov subspaces K_μ(𝕃, Q_i)
//! generated by repeated measurement of each observable, and the spanning
//! test that decides whether the pooled subspaces reach the whole space of
//! Hermitian operators.
//!
//! The verdict is an if-and-only-if: an initial state is determined by the
//! data matrix [⟨Q_i⟩_{t_j}] for suitable times exactly when the Minkowski
//! sum of the per-observable Krylov subspaces (optionally augmented by the
//! identity, standing for the known unit trace) spans every Hermitian
//! direction.

use num_complex::Complex;

use crate::dynamics::GklsGenerator;
use crate::error::{Error, Result};
use crate::hermdecomp::{hermitian_basis, HermitianBasis, HermitianObservable};
use crate::linalg::minimal_poly_degree;
use crate::matrix::{vec_dot, vec_norm, ComplexMatrix};
use crate::scalar::{Scalar, C};
use crate::tol::RankTolerance;

/// The observables {Q_1, …, Q_r} under test, with display labels.
#[derive(Debug, Clone)]
pub struct ObservableSet<F: Scalar> {
    dim: usize,
    observables: Vec<HermitianObservable<F>>,
    labels: Vec<String>,
}

/// Record of a complex input matrix expanded into its two Hermitian
/// measurement channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelExpansion {
    pub source_index: usize,
    pub re_index: usize,
    pub im_index: usize,
}

impl<F: Scalar> ObservableSet<F> {
    pub fn new(observables: Vec<HermitianObservable<F>>) -> Result<Self> {
        let labels = (1..=observables.len()).map(|i| format!("Q{i}")).collect();
        Self::with_labels(observables, labels)
    }

    pub fn with_labels(
        observables: Vec<HermitianObservable<F>>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let Some(first) = observables.first() else {
            return Err(Error::InvalidObservableSet {
                reason: "at least one observable is required".into(),
            });
        };
        let dim = first.dim();
        if observables.iter().any(|q| q.dim() != dim) {
            return Err(Error::InvalidObservableSet {
                reason: "observables must share one dimension".into(),
            });
        }
        if labels.len() != observables.len() {
            return Err(Error::InvalidObservableSet {
                reason: "label count must match observable count".into(),
            });
        }
        Ok(ObservableSet {
            dim,
            observables,
            labels,
        })
    }

    /// Accept arbitrary complex matrices: Hermitian inputs enter directly,
    /// anything else is split into its two Hermitian channels.
    pub fn from_matrices(
        matrices: &[ComplexMatrix<F>],
    ) -> Result<(Self, Vec<ChannelExpansion>)> {
        let mut observables = Vec::new();
        let mut labels = Vec::new();
        let mut expansions = Vec::new();
        for (idx, m) in matrices.iter().enumerate() {
            m.require_square()?;
            let display = idx + 1;
            if m.hermiticity_deviation() <= crate::tol::scaled(crate::tol::HERMITICITY) {
                observables.push(HermitianObservable::new(m.clone())?);
                labels.push(format!("Q{display}"));
            } else {
                let (q1, q2) = crate::hermdecomp::decompose(m)?;
                expansions.push(ChannelExpansion {
                    source_index: idx,
                    re_index: observables.len(),
                    im_index: observables.len() + 1,
                });
                observables.push(q1);
                labels.push(format!("Q{display}.re"));
                observables.push(q2);
                labels.push(format!("Q{display}.im"));
            }
        }
        Ok((Self::with_labels(observables, labels)?, expansions))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    #[inline]
    pub fn observables(&self) -> &[HermitianObservable<F>] {
        &self.observables
    }

    #[inline]
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Krylov subspace of one observable under the adjoint generator.
#[derive(Debug, Clone)]
pub struct KrylovSubspace<F: Scalar> {
    /// Index of the generating observable within its set.
    pub source: usize,
    /// The raw powers {Q, 𝕃*Q, …, (𝕃*)^{μ−1}Q}.
    pub generators: Vec<HermitianObservable<F>>,
    /// Unit-HS-norm Hermitian matrices spanning the same subspace.
    pub orthonormal_basis: Vec<HermitianObservable<F>>,
    /// Numerical dimension of the generators' span, from re-orthogonalized
    /// rank saturation over the vectorized (normalized) stack.
    pub dim: usize,
}

/// Options shared by the reconstructibility entry points.
#[derive(Debug, Clone, Copy)]
pub struct ObservabilityOptions {
    /// Pool the identity alongside the Krylov generators, representing the
    /// a-priori datum Tr ρ = 1.
    pub identity_augmented: bool,
    pub tol: RankTolerance,
}

impl Default for ObservabilityOptions {
    fn default() -> Self {
        ObservabilityOptions {
            identity_augmented: false,
            tol: RankTolerance::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Reconstructible,
    NotReconstructible,
}

/// Outcome of the spanning test with its diagnostics.
#[derive(Debug, Clone)]
pub struct ObservabilityReport<F: Scalar> {
    pub verdict: Verdict,
    /// Degree of the minimal polynomial of the generator's superoperator.
    pub mu: usize,
    /// Set when the minimal-polynomial rank decision was near-threshold.
    pub mu_ambiguous: bool,
    pub per_observable_dims: Vec<usize>,
    pub total_span_dim: usize,
    pub target_dim: usize,
    pub identity_augmented: bool,
    /// Unit-HS-norm Hermitian witness orthogonal to the achieved span;
    /// present exactly when the verdict is negative.
    pub missing_direction: Option<HermitianObservable<F>>,
    pub tolerance_used: f64,
}

impl<F: Scalar> ObservabilityReport<F> {
    #[inline]
    pub fn reconstructible(&self) -> bool {
        self.verdict == Verdict::Reconstructible
    }
}

/// The powers {(𝕃*)^k Q} for k = 0..mu−1, re-hermitized at each step to
/// stop rounding drift from compounding.
fn krylov_generators<F: Scalar>(
    gen: &GklsGenerator<F>,
    q: &HermitianObservable<F>,
    mu: usize,
) -> Result<Vec<HermitianObservable<F>>> {
    let mut out = Vec::with_capacity(mu);
    let mut current = q.clone();
    for k in 0..mu {
        if k > 0 {
            let next = gen.apply_adjoint(current.matrix())?;
            current = HermitianObservable::force_hermitize(&next)?;
        }
        out.push(current.clone());
    }
    Ok(out)
}

/// Rows of real coordinates (against the orthonormalized Hermitian basis)
/// for a pool of Hermitian matrices, each row normalized to unit HS norm.
/// Normalization keeps fast-growing Krylov powers from drowning small
/// independent directions in the rank threshold.
fn coordinate_rows<F: Scalar>(
    pool: &[HermitianObservable<F>],
    unit_basis: &[HermitianObservable<F>],
) -> Result<Vec<Vec<C<F>>>> {
    pool.iter()
        .map(|q| {
            let norm = q.matrix().hs_norm();
            let scaled = if norm > F::zero() {
                q.matrix().scale_re(F::one() / norm)
            } else {
                q.matrix().clone()
            };
            unit_basis
                .iter()
                .map(|lam| {
                    Ok(Complex::new(
                        lam.matrix().hs_inner(&scaled)?.re,
                        F::zero(),
                    ))
                })
                .collect()
        })
        .collect()
}

fn unit_hermitian_basis<F: Scalar>(n: usize) -> Result<Vec<HermitianObservable<F>>> {
    let basis: HermitianBasis<F> = hermitian_basis(n)?;
    Ok(basis
        .elements()
        .iter()
        .map(|lam| lam.scale(F::one() / lam.matrix().hs_norm()))
        .collect())
}

/// Orthonormal basis of the span of a sequence of vectors, accumulated by
/// the same re-orthogonalized saturation process the minimal-polynomial
/// degree uses and at the same tolerance scaling. Power sequences decay
/// toward dominant directions, where an SVD rank threshold on the raw
/// stack is knife-edge unstable; measuring each vector's residual against
/// its own norm keeps the dimension stable however far the sequence is
/// extended.
struct GsSpan<F: Scalar> {
    basis: Vec<Vec<C<F>>>,
}

impl<F: Scalar> GsSpan<F> {
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Same bare relative threshold the minimal-polynomial scan uses: the two
/// decisions must agree on what counts as a dependent power.
fn gs_threshold<F: Scalar>(tol: RankTolerance) -> F {
    tol.threshold::<F>()
}

/// Residual of `row` (normalized) against `basis` after two passes; the
/// normalized residual is pushed onto the basis when it clears `threshold`.
/// Returns whether the row was independent.
fn gs_accept<F: Scalar>(basis: &mut Vec<Vec<C<F>>>, row: &[C<F>], threshold: F) -> bool {
    let norm = vec_norm(row);
    if norm == F::zero() {
        return false;
    }
    let inv = Complex::new(F::one() / norm, F::zero());
    let mut r: Vec<C<F>> = row.iter().map(|&z| z * inv).collect();
    for _pass in 0..2 {
        for q in basis.iter() {
            let coeff = vec_dot(q, &r);
            for (ri, qi) in r.iter_mut().zip(q.iter()) {
                *ri = *ri - coeff * *qi;
            }
        }
    }
    let rn = vec_norm(&r);
    if rn > threshold {
        let inv_r = Complex::new(F::one() / rn, F::zero());
        basis.push(r.iter().map(|&z| z * inv_r).collect());
        true
    } else {
        false
    }
}

/// Span of an arbitrary collection of vectors: every row is scanned.
fn gs_span<F: Scalar>(rows: &[Vec<C<F>>], threshold: F) -> GsSpan<F> {
    let mut basis: Vec<Vec<C<F>>> = Vec::new();
    for row in rows {
        gs_accept(&mut basis, row, threshold);
    }
    GsSpan { basis }
}

/// Span of a power chain: the scan stops at the first dependent power,
/// because dependence of a power is absorbing (M·span ⊆ span thereafter).
/// Later powers carry only rounding junk in new directions, so not
/// scanning them is what makes the chain dimension stable under depth
/// extension.
fn prefix_span<F: Scalar>(rows: &[Vec<C<F>>], threshold: F) -> GsSpan<F> {
    let mut basis: Vec<Vec<C<F>>> = Vec::new();
    for row in rows {
        if !gs_accept(&mut basis, row, threshold) {
            break;
        }
    }
    GsSpan { basis }
}

/// First coordinate direction outside the accepted span, unit-normalized;
/// `None` when the span is already full.
fn gs_complement<F: Scalar>(span: &GsSpan<F>, vec_len: usize, threshold: F) -> Option<Vec<C<F>>> {
    for k in 0..vec_len {
        let mut r = vec![Complex::new(F::zero(), F::zero()); vec_len];
        r[k] = Complex::new(F::one(), F::zero());
        for _pass in 0..2 {
            for q in &span.basis {
                let coeff = vec_dot(q, &r);
                for (ri, qi) in r.iter_mut().zip(q.iter()) {
                    *ri = *ri - coeff * *qi;
                }
            }
        }
        let rn = vec_norm(&r);
        if rn > threshold {
            let inv = Complex::new(F::one() / rn, F::zero());
            return Some(r.iter().map(|&z| z * inv).collect());
        }
    }
    None
}

/// Krylov subspace of a single observable, with its numerical dimension and
/// an orthonormal Hermitian basis of the same span.
pub fn krylov_subspace<F: Scalar>(
    gen: &GklsGenerator<F>,
    q: &HermitianObservable<F>,
    mu: usize,
    tol: RankTolerance,
) -> Result<KrylovSubspace<F>> {
    if mu == 0 {
        return Err(Error::InvalidInput {
            reason: "Krylov depth must be ≥ 1".into(),
        });
    }
    if q.dim() != gen.dim() {
        return Err(Error::dim_mismatch(
            "krylov_subspace",
            (gen.dim(), gen.dim()),
            (q.dim(), q.dim()),
        ));
    }
    let n = gen.dim();
    let generators = krylov_generators(gen, q, mu)?;
    let unit_basis = unit_hermitian_basis::<F>(n)?;
    let rows = coordinate_rows(&generators, &unit_basis)?;
    let span = prefix_span(&rows, gs_threshold(tol));

    let orthonormal_basis = span
        .basis
        .iter()
        .map(|coords| recombine(coords, &unit_basis))
        .collect::<Result<Vec<_>>>()?;
    Ok(KrylovSubspace {
        source: 0,
        generators,
        orthonormal_basis,
        dim: span.dim(),
    })
}

/// Hermitian matrix from a real coordinate vector over the orthonormalized
/// basis.
fn recombine<F: Scalar>(
    coords: &[C<F>],
    unit_basis: &[HermitianObservable<F>],
) -> Result<HermitianObservable<F>> {
    let n = unit_basis[0].dim();
    let mut acc = ComplexMatrix::<F>::zeros(n, n);
    for (k, lam) in unit_basis.iter().enumerate() {
        // Real by construction: the coordinate stack is real.
        acc = &acc + &lam.matrix().scale_re(coords[k].re);
    }
    HermitianObservable::force_hermitize(&acc)
}

/// The spanning test: pooled Krylov generators of every observable
/// (optionally plus the identity) against the full Hermitian space.
pub fn reconstructibility_check<F: Scalar>(
    gen: &GklsGenerator<F>,
    set: &ObservableSet<F>,
    opts: ObservabilityOptions,
) -> Result<ObservabilityReport<F>> {
    if set.dim() != gen.dim() {
        return Err(Error::dim_mismatch(
            "reconstructibility_check",
            (gen.dim(), gen.dim()),
            (set.dim(), set.dim()),
        ));
    }
    let n = gen.dim();
    let target_dim = n * n;

    let min_poly = minimal_poly_degree(&gen.schrodinger_superop().matrix, opts.tol)?;
    let mu = min_poly.degree;

    let threshold = gs_threshold::<F>(opts.tol);
    let unit_basis = unit_hermitian_basis::<F>(n)?;

    // Pool each observable's truncated chain basis, in set order; the
    // Minkowski sum of the subspaces is the span of the union.
    let mut pooled_rows: Vec<Vec<C<F>>> = Vec::new();
    let mut per_observable_dims = Vec::with_capacity(set.len());
    for q in set.observables() {
        let gens = krylov_generators(gen, q, mu)?;
        let rows = coordinate_rows(&gens, &unit_basis)?;
        let chain = prefix_span(&rows, threshold);
        per_observable_dims.push(chain.dim());
        pooled_rows.extend(chain.basis);
    }
    if opts.identity_augmented {
        let id = HermitianObservable::new(ComplexMatrix::identity(n))?;
        pooled_rows.extend(coordinate_rows(std::slice::from_ref(&id), &unit_basis)?);
    }

    let span = gs_span(&pooled_rows, threshold);
    let total_span_dim = span.dim();

    let verdict = if total_span_dim == target_dim {
        Verdict::Reconstructible
    } else {
        Verdict::NotReconstructible
    };
    let missing_direction = if verdict == Verdict::NotReconstructible {
        gs_complement(&span, target_dim, threshold)
            .map(|coords| recombine(&coords, &unit_basis))
            .transpose()?
    } else {
        None
    };

    Ok(ObservabilityReport {
        verdict,
        mu,
        mu_ambiguous: min_poly.ambiguous,
        per_observable_dims,
        total_span_dim,
        target_dim,
        identity_augmented: opts.identity_augmented,
        missing_direction,
        tolerance_used: opts.tol.value(),
    })
}

/// Run the same spanning test with complex ranks over the full matrix
/// space and report whether the two verdicts agree (they always must,
/// since a Hermitian basis of the Hermitian space is also a basis of the
/// full matrix space).
pub fn complex_side_check<F: Scalar>(
    gen: &GklsGenerator<F>,
    set: &ObservableSet<F>,
    opts: ObservabilityOptions,
) -> Result<bool> {
    let report = reconstructibility_check(gen, set, opts)?;
    let n = gen.dim();
    let threshold = gs_threshold::<F>(opts.tol);

    // Same pooled test, ℂ-coefficients over the vectorized matrices.
    let mut pooled_rows: Vec<Vec<C<F>>> = Vec::new();
    for q in set.observables() {
        let rows = krylov_generators(gen, q, report.mu)?
            .iter()
            .map(|g| g.matrix().vectorize())
            .collect::<Result<Vec<_>>>()?;
        pooled_rows.extend(prefix_span(&rows, threshold).basis);
    }
    if opts.identity_augmented {
        pooled_rows.push(ComplexMatrix::identity(n).vectorize()?);
    }
    let complex_rank = gs_span(&pooled_rows, threshold).dim();
    let complex_verdict = complex_rank == n * n;
    Ok(complex_verdict == report.reconstructible())
}

/// Suggest additions from the canonical Hermitian basis that flip a
/// negative verdict, chosen greedily by span gain; deterministic given the
/// fixed basis ordering. Returns an empty list when the set already passes.
pub fn greedy_complete<F: Scalar>(
    gen: &GklsGenerator<F>,
    set: &ObservableSet<F>,
    opts: ObservabilityOptions,
) -> Result<Vec<HermitianObservable<F>>> {
    let report = reconstructibility_check(gen, set, opts)?;
    if report.reconstructible() {
        return Ok(Vec::new());
    }
    let n = gen.dim();
    let target = n * n;
    let mu = report.mu;
    let threshold = gs_threshold::<F>(opts.tol);
    let unit_basis = unit_hermitian_basis::<F>(n)?;

    let chain_rows = |q: &HermitianObservable<F>| -> Result<Vec<Vec<C<F>>>> {
        let gens = krylov_generators(gen, q, mu)?;
        let rows = coordinate_rows(&gens, &unit_basis)?;
        Ok(prefix_span(&rows, threshold).basis)
    };

    let mut pooled_rows: Vec<Vec<C<F>>> = Vec::new();
    for q in set.observables() {
        pooled_rows.extend(chain_rows(q)?);
    }
    if opts.identity_augmented {
        let id = HermitianObservable::new(ComplexMatrix::identity(n))?;
        pooled_rows.extend(coordinate_rows(std::slice::from_ref(&id), &unit_basis)?);
    }

    let candidates = hermitian_basis::<F>(n)?;
    let candidate_rows: Vec<Vec<Vec<C<F>>>> = candidates
        .elements()
        .iter()
        .map(&chain_rows)
        .collect::<Result<_>>()?;

    let mut additions = Vec::new();
    let mut current_rank = gs_span(&pooled_rows, threshold).dim();

    while current_rank < target {
        let mut best: Option<(usize, usize)> = None; // (gain, candidate index)
        for (idx, rows) in candidate_rows.iter().enumerate() {
            let mut trial = pooled_rows.clone();
            trial.extend(rows.iter().cloned());
            let rank = gs_span(&trial, threshold).dim();
            let gain = rank.saturating_sub(current_rank);
            if gain > 0 && best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, idx));
            }
        }
        let Some((gain, idx)) = best else {
            return Err(Error::InvalidInput {
                reason: "no basis candidate increases the span".into(),
            });
        };
        pooled_rows.extend(candidate_rows[idx].iter().cloned());
        additions.push(candidates.elements()[idx].clone());
        current_rank += gain;
    }
    Ok(additions)
}
