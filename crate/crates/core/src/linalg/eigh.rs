//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex;

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::scalar::{lit, Scalar};

/// Eigendecomposition H = V·diag(λ)·V† of a Hermitian matrix, eigenvalues
/// ascending.
#[derive(Debug, Clone)]
pub struct Eigh<F: Scalar> {
    pub eigenvalues: Vec<F>,
    /// Eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: ComplexMatrix<F>,
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (H+H†)/2 before iterating, so tiny
/// representational asymmetries cannot leak into complex eigenvalues;
/// callers are expected to pass certified-Hermitian data.
pub fn eigh<F: Scalar>(h: &ComplexMatrix<F>) -> Result<Eigh<F>> {
    let n = h.require_square()?;
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| {
        (h.get(r, c) + h.get(c, r).conj()).scale(lit(0.5))
    });
    let mut v = ComplexMatrix::<F>::identity(n);

    let scale = a.hs_norm().max(F::min_positive_value());
    let conv = F::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= conv {
                    continue;
                }
                rotated = true;

                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let e = Complex::new(apq.re / mag, -apq.im / mag);
                let zeta = (aqq - app) / (lit::<F>(2.0) * mag);
                let t = if zeta >= F::zero() {
                    F::one() / (zeta + (F::one() + zeta * zeta).sqrt())
                } else {
                    -F::one() / (-zeta + (F::one() + zeta * zeta).sqrt())
                };
                let cs = F::one() / (F::one() + t * t).sqrt();
                let sn = cs * t;
                let csz = Complex::new(cs, F::zero());
                let snz = Complex::new(sn, F::zero());

                // Columns p, q of both A and V pick up J = diag(1, e)·R.
                for r in 0..n {
                    let xp = a.get(r, p);
                    let xq = a.get(r, q);
                    a.set(r, p, csz * xp - snz * e * xq);
                    a.set(r, q, snz * xp + csz * e * xq);

                    let yp = v.get(r, p);
                    let yq = v.get(r, q);
                    v.set(r, p, csz * yp - snz * e * yq);
                    v.set(r, q, snz * yp + csz * e * yq);
                }
                // Rows p, q of A pick up J†; restore exact hermiticity.
                for c in 0..n {
                    let xp = a.get(p, c);
                    let xq = a.get(q, c);
                    a.set(p, c, csz * xp - (snz * e).conj() * xq);
                    a.set(q, c, snz * xp + (csz * e).conj() * xq);
                }
                let dpp = a.get(p, p).re;
                let dqq = a.get(q, q).re;
                a.set(p, p, Complex::new(dpp, F::zero()));
                a.set(q, q, Complex::new(dqq, F::zero()));
                a.set(p, q, Complex::new(F::zero(), F::zero()));
                a.set(q, p, Complex::new(F::zero(), F::zero()));
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<F> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));

    let eigenvalues: Vec<F> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok(Eigh {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigh_diagonal() {
        let d = ComplexMatrix::<f64>::from_rows(&[
            vec![(2.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (-1.0, 0.0)],
        ])
        .unwrap();
        let e = eigh(&d).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_pauli_x() {
        let sx = ComplexMatrix::<f64>::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]])
            .unwrap();
        let e = eigh(&sx).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_reconstructs_random_hermitians() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 1..=6 {
            let h = random_hermitian::<f64, _>(n, &mut rng);
            let m = h.matrix().clone();
            let e = eigh(&m).unwrap();
            let lam = ComplexMatrix::from_fn(n, n, |r, c| {
                if r == c {
                    Complex::new(e.eigenvalues[r], 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            });
            let rebuilt = &(&e.eigenvectors * &lam) * &e.eigenvectors.adjoint();
            assert!(rebuilt.max_diff(&m) < 1e-12, "n = {n}");
            let vhv = &e.eigenvectors.adjoint() * &e.eigenvectors;
            assert!(vhv.max_diff(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }
}
