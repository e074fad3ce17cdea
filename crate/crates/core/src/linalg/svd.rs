//! Singular value decomposition by one-sided Jacobi rotations, plus the
//! rank and minimum-norm least-squares routines built on it.
//!
//! One-sided Jacobi computes small singular values to high relative
//! accuracy, which is what the span/rank verdicts downstream depend on.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{vec_dot, vec_norm, ComplexMatrix};
use crate::scalar::{lit, Scalar, C};
use crate::tol::RankTolerance;

/// Thin SVD A = U·diag(σ)·V†.
///
/// `singular_values` has `cols` entries in descending order; `u` is
/// `rows × cols` with zero columns past the rank; `v` is always the full
/// `cols × cols` unitary, so null-space directions are available even for
/// wide inputs.
#[derive(Debug, Clone)]
pub struct Svd<F: Scalar> {
    pub singular_values: Vec<F>,
    pub u: ComplexMatrix<F>,
    pub v: ComplexMatrix<F>,
}

const MAX_SWEEPS: usize = 64;

/// One-sided Jacobi SVD.
pub fn svd<F: Scalar>(a: &ComplexMatrix<F>) -> Svd<F> {
    let (m0, n) = (a.rows(), a.cols());
    let m = m0.max(n);

    // Rescale extreme inputs so squared column norms stay in the normal
    // range; Jacobi is exactly scale-equivariant.
    let input_scale = a.max_norm();
    let prescale = if input_scale > F::zero()
        && (input_scale < lit(1e-100) || input_scale > lit(1e100))
    {
        input_scale
    } else {
        F::one()
    };
    let inv_prescale = F::one() / prescale;

    // Work on columns; pad with zero rows when the input is wide so the
    // right singular basis stays full.
    let mut cols: Vec<Vec<C<F>>> = (0..n)
        .map(|c| {
            let mut col = Vec::with_capacity(m);
            for r in 0..m0 {
                col.push(a.get(r, c).scale(inv_prescale));
            }
            col.resize(m, Complex::new(F::zero(), F::zero()));
            col
        })
        .collect();
    let mut v: Vec<Vec<C<F>>> = (0..n)
        .map(|c| {
            let mut col = vec![Complex::new(F::zero(), F::zero()); n];
            col[c] = Complex::new(F::one(), F::zero());
            col
        })
        .collect();

    let conv = F::epsilon() * lit::<F>(8.0);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let app = vec_norm(&cols[p]).powi(2);
                let aqq = vec_norm(&cols[q]).powi(2);
                // Subnormal squared norms (columns ~1e-154 of the working
                // scale) are numerically zero: rotating against them only
                // injects subnormal-precision garbage into V.
                if app < F::min_positive_value() || aqq < F::min_positive_value() {
                    continue;
                }
                let apq = vec_dot(&cols[p], &cols[q]);
                let mag = apq.norm();
                // sqrt before multiplying so subnormal column norms cannot
                // underflow the skip threshold.
                if mag <= conv * app.sqrt() * aqq.sqrt() {
                    continue;
                }
                rotated = true;

                // Remove the phase, then apply the classic real rotation:
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]].
                // Componentwise division: |re|, |im| ≤ mag, so this cannot
                // overflow or produce NaN the way (z / complex(mag)) can.
                let e = Complex::new(apq.re / mag, -apq.im / mag);
                let zeta = (aqq - app) / (lit::<F>(2.0) * mag);
                let t = if zeta >= F::zero() {
                    F::one() / (zeta + (F::one() + zeta * zeta).sqrt())
                } else {
                    -F::one() / (-zeta + (F::one() + zeta * zeta).sqrt())
                };
                let cs = F::one() / (F::one() + t * t).sqrt();
                let sn = cs * t;

                rotate_pair(&mut cols, p, q, cs, sn, e);
                rotate_pair(&mut v, p, q, cs, sn, e);
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let sigmas: Vec<F> = cols.iter().map(|c| vec_norm(c)).collect();
    order.sort_by(|&i, &j| {
        sigmas[j]
            .partial_cmp(&sigmas[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut singular_values = Vec::with_capacity(n);
    let mut u = ComplexMatrix::<F>::zeros(m0, n);
    let mut v_out = ComplexMatrix::<F>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let s = sigmas[src];
        singular_values.push(s * prescale);
        if s > F::zero() {
            for r in 0..m0 {
                let z = cols[src][r];
                u.set(r, dst, Complex::new(z.re / s, z.im / s));
            }
        }
        for r in 0..n {
            v_out.set(r, dst, v[src][r]);
        }
    }

    Svd {
        singular_values,
        u,
        v: v_out,
    }
}

fn rotate_pair<F: Scalar>(
    cols: &mut [Vec<C<F>>],
    p: usize,
    q: usize,
    cs: F,
    sn: F,
    e: C<F>,
) {
    let csz = Complex::new(cs, F::zero());
    let snz = Complex::new(sn, F::zero());
    let len = cols[p].len();
    for r in 0..len {
        let xp = cols[p][r];
        let xq = cols[q][r];
        cols[p][r] = csz * xp - snz * e * xq;
        cols[q][r] = snz * xp + csz * e * xq;
    }
}

/// Number of singular values above `tol · s_max · max(rows, cols)`.
pub fn numerical_rank<F: Scalar>(m: &ComplexMatrix<F>, tol: RankTolerance) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = svd(m).singular_values;
    rank_from_singular_values(&sv, m.rows(), m.cols(), tol)
}

pub(crate) fn rank_from_singular_values<F: Scalar>(
    sv: &[F],
    rows: usize,
    cols: usize,
    tol: RankTolerance,
) -> usize {
    let s_max = sv.first().copied().unwrap_or(F::zero());
    let threshold = tol.threshold::<F>() * s_max * lit::<F>(rows.max(cols) as f64);
    sv.iter().filter(|&&s| s > threshold).count()
}

/// Minimum-norm least-squares solution of A·x = b.
#[derive(Debug, Clone)]
pub struct LeastSquares<F: Scalar> {
    pub solution: Vec<C<F>>,
    pub residual_norm: F,
    pub rank: usize,
    /// σ_max / σ_min over all `cols` singular values; infinite when the
    /// smallest is exactly zero (column-rank-deficient system).
    pub condition_number: F,
    pub singular_values: Vec<F>,
}

pub fn least_squares_min_norm<F: Scalar>(
    a: &ComplexMatrix<F>,
    b: &[C<F>],
    tol: RankTolerance,
) -> Result<LeastSquares<F>> {
    if b.len() != a.rows() {
        return Err(Error::dim_mismatch(
            "least_squares",
            (a.rows(), a.cols()),
            (b.len(), 1),
        ));
    }
    let dec = svd(a);
    let rank = rank_from_singular_values(&dec.singular_values, a.rows(), a.cols(), tol);
    let n = a.cols();

    let mut x = vec![Complex::new(F::zero(), F::zero()); n];
    for j in 0..rank {
        let sigma = dec.singular_values[j];
        let mut uj_b = Complex::new(F::zero(), F::zero());
        for r in 0..a.rows() {
            uj_b = uj_b + dec.u.get(r, j).conj() * b[r];
        }
        let coeff = Complex::new(uj_b.re / sigma, uj_b.im / sigma);
        for r in 0..n {
            x[r] = x[r] + dec.v.get(r, j) * coeff;
        }
    }

    let ax = a.apply_vec(&x)?;
    let residual: Vec<C<F>> = ax.iter().zip(b.iter()).map(|(p, q)| *p - *q).collect();
    let s_min = dec.singular_values.last().copied().unwrap_or(F::zero());
    let s_max = dec.singular_values.first().copied().unwrap_or(F::zero());
    let condition_number = if s_min > F::zero() {
        s_max / s_min
    } else {
        F::infinity()
    };

    Ok(LeastSquares {
        solution: x,
        residual_norm: vec_norm(&residual),
        rank,
        condition_number,
        singular_values: dec.singular_values,
    })
}
