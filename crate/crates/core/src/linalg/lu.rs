//! LU factorization with partial pivoting, used by the Padé solve in `expm`.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;

/// Solve A·X = B for square A via LU with partial pivoting.
pub fn solve<F: Scalar>(a: &ComplexMatrix<F>, b: &ComplexMatrix<F>) -> Result<ComplexMatrix<F>> {
    let n = a.require_square()?;
    if b.rows() != n {
        return Err(Error::dim_mismatch(
            "lu_solve",
            (a.rows(), a.cols()),
            (b.rows(), b.cols()),
        ));
    }
    let m = b.cols();
    let mut lu = a.clone();
    let mut x = b.clone();

    for k in 0..n {
        // Pivot on the largest magnitude in column k.
        let mut piv = k;
        let mut best = lu.get(k, k).norm();
        for r in (k + 1)..n {
            let mag = lu.get(r, k).norm();
            if mag > best {
                best = mag;
                piv = r;
            }
        }
        if best == F::zero() {
            return Err(Error::SingularSystem);
        }
        if piv != k {
            for c in 0..n {
                let (u, v) = (lu.get(k, c), lu.get(piv, c));
                lu.set(k, c, v);
                lu.set(piv, c, u);
            }
            for c in 0..m {
                let (u, v) = (x.get(k, c), x.get(piv, c));
                x.set(k, c, v);
                x.set(piv, c, u);
            }
        }
        let pivot = lu.get(k, k);
        for r in (k + 1)..n {
            let factor = lu.get(r, k) / pivot;
            lu.set(r, k, factor);
            for c in (k + 1)..n {
                let v = lu.get(r, c) - factor * lu.get(k, c);
                lu.set(r, c, v);
            }
            for c in 0..m {
                let v = x.get(r, c) - factor * x.get(k, c);
                x.set(r, c, v);
            }
        }
    }

    // Back substitution on the upper triangle.
    for c in 0..m {
        for r in (0..n).rev() {
            let mut acc = x.get(r, c);
            for k in (r + 1)..n {
                acc = acc - lu.get(r, k) * x.get(k, c);
            }
            x.set(r, c, acc / lu.get(r, r));
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_complex_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            let a = random_complex_matrix::<f64, _>(n, n, &mut rng);
            let b = random_complex_matrix::<f64, _>(n, 3, &mut rng);
            let x = solve(&a, &b).unwrap();
            assert!((&(&a * &x) - &b).max_norm() < 1e-11);
        }
    }

    #[test]
    fn rejects_singular() {
        let a = ComplexMatrix::<f64>::zeros(3, 3);
        let b = ComplexMatrix::<f64>::identity(3);
        assert!(matches!(solve(&a, &b), Err(Error::SingularSystem)));
    }
}
