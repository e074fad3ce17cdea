//! Property tests for the algebraic invariants the crate is built on.

use num_complex::Complex;
use proptest::collection::vec;
use proptest::prelude::*;

use qstrobe_core::hermdecomp::{
    complex_span_dim, decompose, real_span_dim, recompose, HermitianObservable,
};
use qstrobe_core::matrix::ComplexMatrix;
use qstrobe_core::RankTolerance;

fn entry() -> impl Strategy<Value = (f64, f64)> {
    ((-1.0..1.0f64), (-1.0..1.0f64))
}

/// The numerics are generic over the scalar; exercise the f32 instantiation
/// end to end at tolerances scaled to its epsilon.
#[test]
fn single_precision_instantiation_works() {
    use qstrobe_core::dynamics::{DensityMatrix, GklsGenerator};
    use qstrobe_core::linalg::expm;

    let sz = ComplexMatrix::<f32>::from_rows(&[
        vec![(1.0, 0.0), (0.0, 0.0)],
        vec![(0.0, 0.0), (-1.0, 0.0)],
    ])
    .unwrap();
    let sx = ComplexMatrix::<f32>::from_rows(&[
        vec![(0.0, 0.0), (1.0, 0.0)],
        vec![(1.0, 0.0), (0.0, 0.0)],
    ])
    .unwrap();

    let (q, r) = decompose(&sx.scale(Complex::new(0.0f32, 1.0))).unwrap();
    assert!(recompose(&q, &r)
        .unwrap()
        .max_diff(&sx.scale(Complex::new(0.0f32, 1.0)))
        < 1e-6);

    let gen = GklsGenerator::new(
        qstrobe_core::hermdecomp::HermitianObservable::new(sz).unwrap(),
        vec![],
    )
    .unwrap();
    let rho0 =
        DensityMatrix::new((&ComplexMatrix::<f32>::identity(2) + &sx).scale_re(0.5)).unwrap();
    let state = gen.propagate_state(&rho0, 0.4f32).unwrap();
    let x = state.matrix.trace_product(&sx).unwrap().re;
    assert!((x - 0.8f32.cos()).abs() < 1e-5);

    let e = expm(&ComplexMatrix::<f32>::zeros(3, 3)).unwrap();
    assert!(e.max_diff(&ComplexMatrix::identity(3)) == 0.0);
}

fn square_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix<f64>> {
    vec(entry(), n * n).prop_map(move |entries| {
        ComplexMatrix::new(
            n,
            n,
            entries
                .into_iter()
                .map(|(re, im)| Complex::new(re, im))
                .collect(),
        )
        .expect("finite entries")
    })
}

fn any_square() -> impl Strategy<Value = ComplexMatrix<f64>> {
    (1usize..=8).prop_flat_map(square_matrix)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vectorize_roundtrip_is_bit_exact(m in any_square()) {
        let v = m.vectorize().unwrap();
        let back = ComplexMatrix::devectorize(&v).unwrap();
        prop_assert!(back == m);
    }

    #[test]
    fn vectorize_intertwines_kron((x, y, z) in (1usize..=3).prop_flat_map(|n| {
        (square_matrix(n), square_matrix(n), square_matrix(n))
    })) {
        // vec(XYZ) = (Zᵀ ⊗ X) vec(Y)
        let lhs = (&(&x * &y) * &z).vectorize().unwrap();
        let op = z.transpose().kron(&x);
        let rhs = op.apply_vec(&y.vectorize().unwrap()).unwrap();
        for (a, b) in lhs.iter().zip(rhs.iter()) {
            prop_assert!((a - b).norm() <= 1e-13);
        }
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric((a, b) in (1usize..=4).prop_flat_map(|n| {
        (square_matrix(n), square_matrix(n))
    })) {
        let ab = a.hs_inner(&b).unwrap();
        let ba = b.hs_inner(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-13);
        // And it matches the vectorized dot product.
        let va = a.vectorize().unwrap();
        let vb = b.vectorize().unwrap();
        let dot = va.iter().zip(vb.iter()).fold(
            Complex::new(0.0, 0.0),
            |acc, (x, y)| acc + x.conj() * y,
        );
        prop_assert!((ab - dot).norm() <= 1e-13);
    }

    #[test]
    fn decompose_is_the_unique_hermitian_split(a in any_square()) {
        let (q, r) = decompose(&a).unwrap();
        prop_assert!(q.matrix().hermiticity_deviation() <= 1e-13);
        prop_assert!(r.matrix().hermiticity_deviation() <= 1e-13);
        prop_assert!(recompose(&q, &r).unwrap().max_diff(&a) <= 1e-14);

        let adj = a.adjoint();
        let q_alg = (&a + &adj).scale_re(0.5);
        let r_alg = (&a - &adj).scale(Complex::new(0.0, -0.5));
        prop_assert!(q.matrix().max_diff(&q_alg) <= 1e-14);
        prop_assert!(r.matrix().max_diff(&r_alg) <= 1e-14);
    }

    #[test]
    fn real_and_complex_spans_agree(mats in (1usize..=4).prop_flat_map(|n| {
        vec(square_matrix(n), 1..=n * n)
    })) {
        let tol = RankTolerance::default();
        let set: Vec<HermitianObservable<f64>> = mats
            .iter()
            .map(|m| HermitianObservable::force_hermitize(m).unwrap())
            .collect();
        let real_dim = real_span_dim(&set, tol).unwrap();
        let complex_mats: Vec<ComplexMatrix<f64>> =
            set.iter().map(|h| h.matrix().clone()).collect();
        let complex_dim = complex_span_dim(&complex_mats, tol).unwrap();
        prop_assert_eq!(real_dim, complex_dim);
    }
}
