//! Hermitian decomposition of complex matrices and its consequences:
//! generalized (complex) observables, complex mean values, Hermitian
//! operator bases, and real/complex span dimensions.
//!
//! Any complex matrix A splits uniquely as A = Q + iR with Q, R Hermitian.
//! That turns arbitrary matrices into pairs of measurable observables and
//! complex mean values Tr(Aρ) = ⟨Q⟩ + i⟨R⟩ into pairs of real mean values.

use num_complex::Complex;

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::numerical_rank;
use crate::matrix::ComplexMatrix;
use crate::scalar::{lit, to_f64, Scalar, C};
use crate::tol::{self, RankTolerance};

/// A certified Hermitian matrix; the measurable unit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable<F: Scalar> {
    matrix: ComplexMatrix<F>,
}

impl<F: Scalar> HermitianObservable<F> {
    /// Certify hermiticity at the entrywise construction tolerance.
    /// Inputs that fail are rejected, never symmetrized silently; use
    /// [`force_hermitize`](Self::force_hermitize) for intentional cleanup.
    pub fn new(matrix: ComplexMatrix<F>) -> Result<Self> {
        matrix.require_square()?;
        let dev = matrix.hermiticity_deviation();
        if dev > tol::scaled(tol::HERMITICITY) {
            return Err(Error::NotHermitian {
                deviation: to_f64(dev),
            });
        }
        Ok(HermitianObservable { matrix })
    }

    /// Replace M by (M + M†)/2 and certify the result.
    pub fn force_hermitize(m: &ComplexMatrix<F>) -> Result<Self> {
        m.require_square()?;
        let sym = ComplexMatrix::from_fn(m.rows(), m.rows(), |r, c| {
            (m.get(r, c) + m.get(c, r).conj()).scale(lit(0.5))
        });
        Ok(HermitianObservable { matrix: sym })
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<F> {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix<F> {
        self.matrix
    }

    /// Real linear combination a·self + b·other (Hermitian for real a, b).
    pub fn combine(&self, a: F, other: &Self, b: F) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::dim_mismatch(
                "observable combination",
                (self.dim(), self.dim()),
                (other.dim(), other.dim()),
            ));
        }
        Ok(HermitianObservable {
            matrix: &self.matrix.scale_re(a) + &other.matrix.scale_re(b),
        })
    }

    pub fn scale(&self, a: F) -> Self {
        HermitianObservable {
            matrix: self.matrix.scale_re(a),
        }
    }

    /// Mean value Tr(Q·ρ); real for a Hermitian observable.
    pub fn mean(&self, rho: &DensityMatrix<F>) -> Result<F> {
        Ok(self.matrix.trace_product(rho.matrix())?.re)
    }
}

/// An arbitrary complex matrix treated as measurable through its cached
/// Hermitian decomposition A = Q₁ + iQ₂.
#[derive(Debug, Clone)]
pub struct GeneralizedObservable<F: Scalar> {
    a: ComplexMatrix<F>,
    q1: HermitianObservable<F>,
    q2: HermitianObservable<F>,
}

impl<F: Scalar> GeneralizedObservable<F> {
    pub fn new(a: ComplexMatrix<F>) -> Result<Self> {
        let (q1, q2) = decompose(&a)?;
        Ok(GeneralizedObservable { a, q1, q2 })
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<F> {
        &self.a
    }

    /// Real-part observable Q₁.
    #[inline]
    pub fn real_part(&self) -> &HermitianObservable<F> {
        &self.q1
    }

    /// Imaginary-part observable Q₂.
    #[inline]
    pub fn imag_part(&self) -> &HermitianObservable<F> {
        &self.q2
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

/// Split A into its unique Hermitian pair (Q, R) with A = Q + iR.
///
/// Computed entrywise:
///   q_jk = (Re a_jk + Re a_kj)/2 + i (Im a_jk − Im a_kj)/2
///   r_jk = (Im a_jk + Im a_kj)/2 + i (Re a_kj − Re a_jk)/2
/// which reproduces Q = (A+A†)/2 and R = (A−A†)/(2i).
pub fn decompose<F: Scalar>(
    a: &ComplexMatrix<F>,
) -> Result<(HermitianObservable<F>, HermitianObservable<F>)> {
    let n = a.require_square()?;
    let half = lit::<F>(0.5);
    let q = ComplexMatrix::from_fn(n, n, |j, k| {
        let ajk = a.get(j, k);
        let akj = a.get(k, j);
        Complex::new((ajk.re + akj.re) * half, (ajk.im - akj.im) * half)
    });
    let r = ComplexMatrix::from_fn(n, n, |j, k| {
        let ajk = a.get(j, k);
        let akj = a.get(k, j);
        Complex::new((ajk.im + akj.im) * half, (akj.re - ajk.re) * half)
    });
    // Hermitian exactly by the symmetry of the formulas.
    Ok((HermitianObservable::new(q)?, HermitianObservable::new(r)?))
}

/// Reassemble A = Q + iR.
pub fn recompose<F: Scalar>(
    q: &HermitianObservable<F>,
    r: &HermitianObservable<F>,
) -> Result<ComplexMatrix<F>> {
    if q.dim() != r.dim() {
        return Err(Error::dim_mismatch(
            "recompose",
            (q.dim(), q.dim()),
            (r.dim(), r.dim()),
        ));
    }
    let i = Complex::new(F::zero(), F::one());
    Ok(q.matrix() + &r.matrix().scale(i))
}

/// Complex mean value ⟨A⟩ = Tr(A·ρ) = ⟨Q₁⟩ + i⟨Q₂⟩.
pub fn complex_mean<F: Scalar>(
    a: &GeneralizedObservable<F>,
    rho: &DensityMatrix<F>,
) -> Result<C<F>> {
    a.matrix().trace_product(rho.matrix())
}

/// Hilbert–Schmidt-orthogonal basis of the Hermitian matrices: generalized
/// Gell-Mann construction with a fixed ordering — symmetric pairs
/// E_jk + E_kj (j < k, lexicographic), antisymmetric pairs −i(E_jk − E_kj),
/// the n−1 diagonal traceless generators, and the identity last.
#[derive(Debug, Clone)]
pub struct HermitianBasis<F: Scalar> {
    dim: usize,
    elements: Vec<HermitianObservable<F>>,
}

impl<F: Scalar> HermitianBasis<F> {
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn elements(&self) -> &[HermitianObservable<F>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn hermitian_basis<F: Scalar>(n: usize) -> Result<HermitianBasis<F>> {
    if n == 0 {
        return Err(Error::InvalidInput {
            reason: "hermitian basis requires dimension ≥ 1".into(),
        });
    }
    let one = Complex::new(F::one(), F::zero());
    let i = Complex::new(F::zero(), F::one());
    let mut elements = Vec::with_capacity(n * n);

    for j in 0..n {
        for k in (j + 1)..n {
            let sym = &ComplexMatrix::matrix_unit(n, j, k) + &ComplexMatrix::matrix_unit(n, k, j);
            elements.push(HermitianObservable::new(sym.scale(one))?);
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let asym = &ComplexMatrix::matrix_unit(n, j, k) - &ComplexMatrix::matrix_unit(n, k, j);
            elements.push(HermitianObservable::new(asym.scale(-i))?);
        }
    }
    for l in 1..n {
        // Σ_{m<l} E_mm − l·E_ll, traceless and orthogonal to its peers.
        let mut d = ComplexMatrix::<F>::zeros(n, n);
        for m in 0..l {
            d.set(m, m, one);
        }
        d.set(l, l, Complex::new(-lit::<F>(l as f64), F::zero()));
        elements.push(HermitianObservable::new(d)?);
    }
    elements.push(HermitianObservable::new(ComplexMatrix::identity(n))?);

    Ok(HermitianBasis { dim: n, elements })
}

/// Real coordinates of a Hermitian matrix against `hermitian_basis(n)`.
pub fn real_coordinates<F: Scalar>(
    x: &HermitianObservable<F>,
    basis: &HermitianBasis<F>,
) -> Result<Vec<F>> {
    basis
        .elements()
        .iter()
        .map(|lam| Ok(lam.matrix().hs_inner(x.matrix())?.re))
        .collect()
}

/// Dimension of the real linear span of a Hermitian set inside the real
/// vector space of Hermitian matrices.
pub fn real_span_dim<F: Scalar>(
    set: &[HermitianObservable<F>],
    tol: RankTolerance,
) -> Result<usize> {
    let Some(first) = set.first() else {
        return Ok(0);
    };
    let n = first.dim();
    if set.iter().any(|x| x.dim() != n) {
        return Err(Error::dim_mismatch(
            "real_span_dim",
            (n, n),
            (set.iter().map(HermitianObservable::dim).max().unwrap_or(0), 0),
        ));
    }
    let basis = hermitian_basis::<F>(n)?;
    let rows: Vec<Vec<C<F>>> = set
        .iter()
        .map(|x| {
            real_coordinates(x, &basis).map(|coords| {
                coords
                    .into_iter()
                    .map(|c| Complex::new(c, F::zero()))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    let stack = ComplexMatrix::from_stacked_rows(&rows)?;
    Ok(numerical_rank(&stack, tol))
}

/// Dimension of the complex linear span inside the full matrix space.
pub fn complex_span_dim<F: Scalar>(
    set: &[ComplexMatrix<F>],
    tol: RankTolerance,
) -> Result<usize> {
    let Some(first) = set.first() else {
        return Ok(0);
    };
    let n = first.require_square()?;
    if set.iter().any(|x| x.rows() != n || x.cols() != n) {
        return Err(Error::dim_mismatch("complex_span_dim", (n, n), (0, 0)));
    }
    let rows: Vec<Vec<C<F>>> = set.iter().map(ComplexMatrix::vectorize).collect::<Result<_>>()?;
    let stack = ComplexMatrix::from_stacked_rows(&rows)?;
    Ok(numerical_rank(&stack, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_complex_matrix, random_density_matrix, random_hermitian};
    use crate::scalar::cplx;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn pauli(which: char) -> ComplexMatrix<f64> {
        match which {
            'x' => ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]]),
            'y' => ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (0.0, -1.0)], vec![(0.0, 1.0), (0.0, 0.0)]]),
            'z' => ComplexMatrix::from_rows(&[vec![(1.0, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (-1.0, 0.0)]]),
            _ => unreachable!(),
        }
        .unwrap()
    }

    #[test]
    fn decompose_purely_imaginary_scalar() {
        let a = ComplexMatrix::<f64>::from_rows(&[vec![(0.0, 1.0)]]).unwrap();
        let (q, r) = decompose(&a).unwrap();
        assert_eq!(q.matrix().get(0, 0), cplx(0.0, 0.0));
        assert_eq!(r.matrix().get(0, 0), cplx(1.0, 0.0));
    }

    #[test]
    fn decompose_hermitian_input_has_zero_imag_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let h = random_hermitian::<f64, _>(3, &mut rng);
        let (q, r) = decompose(h.matrix()).unwrap();
        assert!(q.matrix().max_diff(h.matrix()) < 1e-15);
        assert!(r.matrix().max_norm() < 1e-15);
    }

    #[test]
    fn decompose_upper_shift_gives_half_paulis() {
        // A = E_01 → Q = σ_x/2, R = σ_y/2, from the entrywise formulas.
        let a = ComplexMatrix::matrix_unit(2, 0, 1);
        let (q, r) = decompose(&a).unwrap();
        assert!(q.matrix().max_diff(&pauli('x').scale_re(0.5)) < 1e-16);
        assert!(r.matrix().max_diff(&pauli('y').scale_re(0.5)) < 1e-16);
    }

    #[test]
    fn decompose_rejects_non_square() {
        assert!(decompose(&ComplexMatrix::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn recompose_pauli_pair() {
        let q = HermitianObservable::new(pauli('x')).unwrap();
        let r = HermitianObservable::new(pauli('z')).unwrap();
        let a = recompose(&q, &r).unwrap();
        let want = ComplexMatrix::from_rows(&[vec![(0.0, 1.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, -1.0)]])
            .unwrap();
        assert!(a.max_diff(&want) < 1e-16);
    }

    #[test]
    fn decompose_recompose_roundtrip_and_uniqueness() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for n in 1..=4 {
            let a = random_complex_matrix::<f64, _>(n, n, &mut rng);
            let (q, r) = decompose(&a).unwrap();
            assert!(recompose(&q, &r).unwrap().max_diff(&a) < 1e-15);

            // Algebraic route: Q = (A+A†)/2, R = (A−A†)/(2i).
            let adj = a.adjoint();
            let q_alg = (&a + &adj).scale_re(0.5);
            let r_alg = (&a - &adj).scale(cplx(0.0, -0.5));
            assert!(q.matrix().max_diff(&q_alg) < 1e-14);
            assert!(r.matrix().max_diff(&r_alg) < 1e-14);
        }
    }

    #[test]
    fn decompose_of_adjoint_flips_imag_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let a = random_complex_matrix::<f64, _>(3, 3, &mut rng);
        let (q, r) = decompose(&a).unwrap();
        let (qa, ra) = decompose(&a.adjoint()).unwrap();
        assert!(qa.matrix().max_diff(q.matrix()) < 1e-15);
        assert!(ra.matrix().max_diff(&r.matrix().scale_re(-1.0)) < 1e-15);
    }

    #[test]
    fn hermiticity_certification_rejects_and_force_fixes() {
        let mut almost = pauli('x');
        almost.set(0, 1, cplx(1.0, 1e-9));
        let err = HermitianObservable::new(almost.clone()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
        let fixed = HermitianObservable::force_hermitize(&almost).unwrap();
        assert!(fixed.matrix().hermiticity_deviation() == 0.0);
    }

    #[test]
    fn complex_mean_maximally_mixed_gives_scaled_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let n = 3;
        let a = random_complex_matrix::<f64, _>(n, n, &mut rng);
        let gen_obs = GeneralizedObservable::new(a.clone()).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::identity(n).scale_re(1.0 / n as f64)).unwrap();
        let mean = complex_mean(&gen_obs, &rho).unwrap();
        let want = a.trace() * cplx(1.0 / n as f64, 0.0);
        assert!((mean - want).norm() < 1e-14);
    }

    #[test]
    fn complex_mean_hand_case() {
        // A = E_01, ρ = (I + σ_x/2 + σ_y/3)/2 → ⟨A⟩ = 1/4 + i/6.
        let a = GeneralizedObservable::new(ComplexMatrix::matrix_unit(2, 0, 1)).unwrap();
        let rho_m = &(&ComplexMatrix::identity(2) + &pauli('x').scale_re(0.5)).scale_re(0.5)
            + &pauli('y').scale_re(1.0 / 6.0);
        let rho = DensityMatrix::new(rho_m).unwrap();
        let mean = complex_mean(&a, &rho).unwrap();
        assert!((mean - cplx(0.25, 1.0 / 6.0)).norm() < 1e-14);

        // And it equals ⟨Q₁⟩ + i⟨Q₂⟩.
        let q1 = a.real_part().mean(&rho).unwrap();
        let q2 = a.imag_part().mean(&rho).unwrap();
        assert!((mean - cplx(q1, q2)).norm() < 1e-14);
        assert!((q1 - 0.25).abs() < 1e-14);
        assert!((q2 - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn complex_mean_is_real_for_hermitian_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let h = random_hermitian::<f64, _>(3, &mut rng);
        let a = GeneralizedObservable::new(h.matrix().clone()).unwrap();
        let rho = random_density_matrix::<f64, _>(3, &mut rng);
        let mean = complex_mean(&a, &rho).unwrap();
        assert!(mean.im.abs() < 1e-13);
        assert!(a.imag_part().matrix().max_norm() < 1e-15);
    }

    #[test]
    fn complex_mean_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let n = 3;
        let rho = random_density_matrix::<f64, _>(n, &mut rng);
        let a = random_complex_matrix::<f64, _>(n, n, &mut rng);
        let b = random_complex_matrix::<f64, _>(n, n, &mut rng);
        let alpha = cplx::<f64>(0.3, -1.1);
        let beta = cplx::<f64>(-0.7, 0.2);
        let combo = &a.scale(alpha) + &b.scale(beta);
        let lhs = complex_mean(&GeneralizedObservable::new(combo).unwrap(), &rho).unwrap();
        let rhs = alpha * complex_mean(&GeneralizedObservable::new(a).unwrap(), &rho).unwrap()
            + beta * complex_mean(&GeneralizedObservable::new(b).unwrap(), &rho).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn basis_for_qubits_is_the_pauli_set() {
        let basis = hermitian_basis::<f64>(2).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(basis.elements()[0].matrix().max_diff(&pauli('x')) < 1e-16);
        assert!(basis.elements()[1].matrix().max_diff(&pauli('y')) < 1e-16);
        assert!(basis.elements()[2].matrix().max_diff(&pauli('z')) < 1e-16);
        assert!(basis.elements()[3]
            .matrix()
            .max_diff(&ComplexMatrix::identity(2))
            < 1e-16);
    }

    #[test]
    fn basis_is_hs_orthogonal_with_n_squared_elements() {
        for n in 1..=5 {
            let basis = hermitian_basis::<f64>(n).unwrap();
            assert_eq!(basis.len(), n * n);
            for (i, a) in basis.elements().iter().enumerate() {
                assert!(a.matrix().hs_norm() > 0.0);
                for b in basis.elements().iter().skip(i + 1) {
                    let inner = a.matrix().hs_inner(b.matrix()).unwrap();
                    assert!(inner.norm() < 1e-13, "n = {n}");
                }
            }
        }
        assert!(hermitian_basis::<f64>(0).is_err());
    }

    #[test]
    fn span_dims_on_hand_cases() {
        let tol = RankTolerance::default();
        let sx = HermitianObservable::new(pauli('x')).unwrap();
        let sy = HermitianObservable::new(pauli('y')).unwrap();
        let sz = HermitianObservable::new(pauli('z')).unwrap();
        let id = HermitianObservable::new(ComplexMatrix::identity(2)).unwrap();

        assert_eq!(real_span_dim(&[sx.clone(), sy.clone()], tol).unwrap(), 2);
        assert_eq!(
            real_span_dim(&[sx.clone(), sx.scale(2.0)], tol).unwrap(),
            1
        );
        let mixed = sx.combine(1.0, &sz, 1.0).unwrap().combine(1.0, &id, 1.0).unwrap();
        assert_eq!(
            real_span_dim(&[mixed.clone(), sy.clone(), sx.clone()], tol).unwrap(),
            3
        );
        assert_eq!(real_span_dim::<f64>(&[], tol).unwrap(), 0);

        // Complex side of the same cases.
        assert_eq!(
            complex_span_dim(
                &[pauli('x'), pauli('y'), pauli('z'), ComplexMatrix::identity(2)],
                tol
            )
            .unwrap(),
            4
        );
        assert_eq!(
            complex_span_dim(&[pauli('x'), pauli('x').scale(cplx(0.0, 1.0))], tol).unwrap(),
            1
        );
        assert_eq!(
            complex_span_dim(
                &[mixed.matrix().clone(), pauli('y'), pauli('x')],
                tol
            )
            .unwrap(),
            3
        );
    }

    #[test]
    fn real_and_complex_span_dims_agree_on_random_hermitian_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let tol = RankTolerance::default();
        for _ in 0..60 {
            let n = rng.random_range(1..=5usize);
            let count = rng.random_range(1..=n * n);
            let set: Vec<_> = (0..count)
                .map(|_| random_hermitian::<f64, _>(n, &mut rng))
                .collect();
            let real_dim = real_span_dim(&set, tol).unwrap();
            let mats: Vec<_> = set.iter().map(|h| h.matrix().clone()).collect();
            let complex_dim = complex_span_dim(&mats, tol).unwrap();
            assert_eq!(real_dim, complex_dim, "n = {n}, count = {count}");
        }
    }
}
