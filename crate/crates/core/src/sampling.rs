//! Seeded random generators for matrices, states, and GKLS generators.
//!
//! Used by the randomized verification sweeps and handy for experiment
//! scripting; all sampling happens in f64 and is converted to the working
//! scalar, so a fixed seed draws the same problem at every precision.

use num_complex::Complex;
use rand::Rng;

use crate::dynamics::{DensityMatrix, GklsGenerator};
use crate::hermdecomp::HermitianObservable;
use crate::matrix::ComplexMatrix;
use crate::scalar::{cplx, lit, Scalar};

/// Matrix with entries uniform on the complex square [−1, 1] × [−1, 1]i.
pub fn random_complex_matrix<F: Scalar, R: Rng>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> ComplexMatrix<F> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random Hermitian matrix (G + G†)/2 with entries of order one.
pub fn random_hermitian<F: Scalar, R: Rng>(n: usize, rng: &mut R) -> HermitianObservable<F> {
    let g = random_complex_matrix::<F, _>(n, n, rng);
    HermitianObservable::force_hermitize(&g).expect("square by construction")
}

/// Random full-rank density matrix G·G† / Tr(G·G†).
pub fn random_density_matrix<F: Scalar, R: Rng>(n: usize, rng: &mut R) -> DensityMatrix<F> {
    let g = random_complex_matrix::<F, _>(n, n, rng);
    let psd = &g * &g.adjoint();
    let trace = psd.trace().re;
    DensityMatrix::new(psd.scale_re(F::one() / trace)).expect("normalized Gram matrix is a state")
}

/// Random unitary via Gram–Schmidt on a random complex matrix.
pub fn random_unitary<F: Scalar, R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix<F> {
    loop {
        let g = random_complex_matrix::<F, _>(n, n, rng);
        let mut cols: Vec<Vec<Complex<F>>> = (0..n)
            .map(|c| (0..n).map(|r| g.get(r, c)).collect())
            .collect();
        let mut ok = true;
        'gs: for c in 0..n {
            for prev in 0..c {
                let coeff = crate::matrix::vec_dot(&cols[prev], &cols[c]);
                let prev_col = cols[prev].clone();
                for (x, p) in cols[c].iter_mut().zip(prev_col.iter()) {
                    *x = *x - coeff * *p;
                }
            }
            let norm = crate::matrix::vec_norm(&cols[c]);
            if norm < lit(1e-6) {
                ok = false;
                break 'gs;
            }
            let inv = Complex::new(F::one() / norm, F::zero());
            for x in cols[c].iter_mut() {
                *x = *x * inv;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(n, n, |r, c| cols[c][r]);
        }
    }
}

/// Random GKLS generator: Hermitian Hamiltonian of order one plus up to
/// `max_dissipators` jump operators with rates uniform on [0, 1].
pub fn random_gkls<F: Scalar, R: Rng>(
    n: usize,
    max_dissipators: usize,
    rng: &mut R,
) -> GklsGenerator<F> {
    let h = random_hermitian::<F, _>(n, rng);
    let count = if max_dissipators == 0 {
        0
    } else {
        rng.random_range(0..=max_dissipators)
    };
    let dissipators = (0..count)
        .map(|_| {
            let op = random_complex_matrix::<F, _>(n, n, rng);
            let rate = lit::<F>(rng.random_range(0.0..1.0));
            (op, rate)
        })
        .collect();
    GklsGenerator::new(h, dissipators).expect("randomly drawn generator is valid")
}
