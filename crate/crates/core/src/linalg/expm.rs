//! Matrix exponential by scaling-and-squaring with Padé approximants,
//! following Higham (2005), "The Scaling and Squaring Method for the Matrix
//! Exponential Revisited".

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{lit, to_f64, Scalar};

// θ_m thresholds for the [m/m] Padé orders used below (Higham 2005, Table 2.3).
const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential e^M.
///
/// Errors out instead of returning Inf/NaN entries when the result leaves
/// floating-point range.
pub fn expm<F: Scalar>(m: &ComplexMatrix<F>) -> Result<ComplexMatrix<F>> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let norm = to_f64(m.one_norm());

    let mut a = m.clone();
    let mut squarings = 0u32;
    let order = THETA
        .iter()
        .find(|&&(_, theta)| norm <= theta)
        .map(|&(ord, _)| ord);
    let order = match order {
        Some(ord) => ord,
        None => {
            let theta13 = THETA[4].1;
            squarings = (norm / theta13).log2().ceil().max(0.0) as u32;
            if squarings > 1020 {
                return Err(Error::ExpmRange { norm });
            }
            a = a.scale_re(lit::<F>(0.5).powi(squarings as i32));
            13
        }
    };

    let r = match order {
        3 => pade_low(&a, &B3)?,
        5 => pade_low(&a, &B5)?,
        7 => pade_low(&a, &B7)?,
        9 => pade_low(&a, &B9)?,
        _ => pade_13(&a)?,
    };

    let mut result = r;
    for _ in 0..squarings {
        result = &result * &result;
    }

    // A huge but representable intermediate can still overflow during
    // squaring; surface that as a range error.
    for r in 0..n {
        for c in 0..n {
            let z = result.get(r, c);
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::ExpmRange { norm });
            }
        }
    }
    Ok(result)
}

/// [m/m] Padé approximant for m ∈ {3,5,7,9}: U odd part, V even part,
/// then solve (V−U)·R = (V+U).
fn pade_low<F: Scalar>(a: &ComplexMatrix<F>, b: &[f64]) -> Result<ComplexMatrix<F>> {
    let n = a.rows();
    let ident = ComplexMatrix::<F>::identity(n);
    let a2 = a * a;

    // Even powers a^0, a^2, a^4, ... as needed by the coefficient list.
    let mut even_pows = vec![ident.clone()];
    let mut k = 2;
    while k < b.len() {
        let next = &even_pows[even_pows.len() - 1] * &a2;
        even_pows.push(next);
        k += 2;
    }

    let mut u_poly = ComplexMatrix::<F>::zeros(n, n);
    let mut v = ComplexMatrix::<F>::zeros(n, n);
    for (i, &coeff) in b.iter().enumerate() {
        let term = even_pows[i / 2].scale(Complex::new(lit(coeff), F::zero()));
        if i % 2 == 1 {
            u_poly = &u_poly + &term;
        } else {
            v = &v + &term;
        }
    }
    let u = a * &u_poly;
    super::lu::solve(&(&v - &u), &(&v + &u))
}

fn pade_13<F: Scalar>(a: &ComplexMatrix<F>) -> Result<ComplexMatrix<F>> {
    let n = a.rows();
    let ident = ComplexMatrix::<F>::identity(n);
    let b: Vec<Complex<F>> = B13.iter().map(|&x| Complex::new(lit(x), F::zero())).collect();
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9]);
    let u_outer = &(&(&a6.scale(b[7]) + &a4.scale(b[5])) + &a2.scale(b[3])) + &ident.scale(b[1]);
    let u = a * &(&(&a6 * &u_inner) + &u_outer);

    let v_inner = &(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8]);
    let v = &(&(&a6 * &v_inner) + &(&(&a6.scale(b[6]) + &a4.scale(b[4])) + &a2.scale(b[2])))
        + &ident.scale(b[0]);

    super::lu::solve(&(&v - &u), &(&v + &u))
}
