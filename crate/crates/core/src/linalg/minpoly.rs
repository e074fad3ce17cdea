//! Minimal-polynomial degree by incremental Krylov-rank saturation on
//! vectorized matrix powers.

use num_complex::Complex;

use crate::error::Result;
use crate::matrix::{vec_dot, vec_norm, ComplexMatrix};
use crate::scalar::{lit, Scalar, C};
use crate::tol::RankTolerance;

/// Degree of the minimal polynomial, with a flag set when a
/// re-orthogonalized residual fell inside the tolerance gray zone
/// (within a factor of 10 of the acceptance threshold on either side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalPolyDegree {
    pub degree: usize,
    pub ambiguous: bool,
}

/// Smallest k ≥ 1 with M^k in the span of {M^0, …, M^{k−1}}.
///
/// Powers are vectorized, normalized, and orthogonalized against the
/// accepted set with two Gram–Schmidt passes; the first dependent power
/// stops the scan (dependence of powers is absorbing, so no later power
/// can reopen the span).
pub fn minimal_poly_degree<F: Scalar>(
    m: &ComplexMatrix<F>,
    tol: RankTolerance,
) -> Result<MinimalPolyDegree> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(MinimalPolyDegree {
            degree: 1,
            ambiguous: false,
        });
    }
    let vec_len = n * n;

    // Scaling M leaves the degree unchanged and keeps powers bounded.
    let norm = m.one_norm();
    let work = if norm > F::one() {
        m.scale_re(F::one() / norm)
    } else {
        m.clone()
    };

    // Bare relative residual threshold. The Krylov spanning tests apply
    // the same rule, and the two must agree on what counts as a dependent
    // power or observable chains could outgrow the detected degree.
    let threshold = tol.threshold::<F>();
    let gray_low = threshold / lit::<F>(10.0);
    let gray_high = threshold * lit::<F>(10.0);

    let mut basis: Vec<Vec<C<F>>> = Vec::new();
    let mut power = ComplexMatrix::<F>::identity(n);
    let mut ambiguous = false;

    for k in 0..=vec_len {
        let v = power.vectorize()?;
        let nv = vec_norm(&v);
        let residual_norm = if nv == F::zero() {
            F::zero()
        } else {
            let inv = Complex::new(F::one() / nv, F::zero());
            let mut r: Vec<C<F>> = v.iter().map(|&z| z * inv).collect();
            for _pass in 0..2 {
                for q in &basis {
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
            }
            rn
        };

        if residual_norm > gray_low && residual_norm < gray_high {
            ambiguous = true;
        }
        if residual_norm <= threshold {
            return Ok(MinimalPolyDegree {
                degree: k.max(1),
                ambiguous,
            });
        }
        if k == vec_len {
            // Cayley–Hamilton guarantees saturation by now; reaching this
            // point means the tolerance never fired, so report the cap.
            return Ok(MinimalPolyDegree {
                degree: vec_len,
                ambiguous: true,
            });
        }
        power = &power * &work;
    }
    unreachable!("power iteration always terminates via the saturation test");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::commutator;
    use crate::sampling::random_complex_matrix;
    use crate::scalar::cplx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn degree(m: &ComplexMatrix<f64>) -> usize {
        minimal_poly_degree(m, RankTolerance::default())
            .unwrap()
            .degree
    }

    #[test]
    fn zero_matrix_has_degree_one() {
        assert_eq!(degree(&ComplexMatrix::<f64>::zeros(3, 3)), 1);
    }

    #[test]
    fn identity_has_degree_one() {
        assert_eq!(degree(&ComplexMatrix::<f64>::identity(4)), 1);
    }

    #[test]
    fn repeated_eigenvalue_diagonal() {
        // diag(1, 2, 2): annihilated by (x−1)(x−2).
        let d = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (2.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0), (2.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(degree(&d), 2);
    }

    #[test]
    fn jordan_block_needs_full_degree() {
        // 3x3 nilpotent Jordan block: minimal polynomial x^3.
        let mut j = ComplexMatrix::<f64>::zeros(3, 3);
        j.set(0, 1, cplx(1.0, 0.0));
        j.set(1, 2, cplx(1.0, 0.0));
        assert_eq!(degree(&j), 3);
    }

    #[test]
    fn commutator_superoperator_with_sigma_z() {
        // Lρ = −i[σ_z, ρ] has eigenvalues {0, 0, 2i, −2i} and is
        // diagonalizable, so the minimal polynomial is x(x−2i)(x+2i).
        let sz = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (-1.0, 0.0)],
        ])
        .unwrap();
        let n = 2;
        let mut superop = ComplexMatrix::<f64>::zeros(n * n, n * n);
        for col in 0..n * n {
            let mut basis_vec = vec![cplx::<f64>(0.0, 0.0); n * n];
            basis_vec[col] = cplx(1.0, 0.0);
            let e = ComplexMatrix::devectorize(&basis_vec).unwrap();
            let image = commutator(&sz, &e).scale(cplx(0.0, -1.0));
            for (row, z) in image.vectorize().unwrap().into_iter().enumerate() {
                superop.set(row, col, z);
            }
        }
        assert_eq!(degree(&superop), 3);
    }

    #[test]
    fn invariant_under_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let d = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (2.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0), (2.0, 0.0)],
        ])
        .unwrap();
        let tol = RankTolerance::new(1e-9).unwrap();
        for _ in 0..5 {
            // S = I + small perturbation keeps the condition number low.
            let p = random_complex_matrix::<f64, _>(3, 3, &mut rng).scale_re(0.2);
            let s = &ComplexMatrix::identity(3) + &p;
            let s_inv = crate::linalg::solve(&s, &ComplexMatrix::identity(3)).unwrap();
            let sim = &(&s * &d) * &s_inv;
            let got = minimal_poly_degree(&sim, tol).unwrap();
            assert_eq!(got.degree, 2);
        }
    }
}
