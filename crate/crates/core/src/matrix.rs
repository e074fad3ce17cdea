//! Dense complex matrices: the universal carrier for operators, generators,
//! and superoperators.
//!
//! Matrices are immutable values after construction; every operation returns
//! a new value. Construction rejects non-finite entries, so NaN/Inf never
//! enter downstream arithmetic.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<F>>,
}

impl<F: Scalar> ComplexMatrix<F> {
    /// Build from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<F>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                len: data.len(),
                rows,
                cols,
            });
        }
        let m = ComplexMatrix { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Build entrywise from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<F>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::new(F::zero(), F::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex::new(F::one(), F::zero())
            } else {
                Complex::new(F::zero(), F::zero())
            }
        })
    }

    /// Matrix unit E_{jk}: 1 in row `j`, column `k`, zero elsewhere.
    pub fn matrix_unit(n: usize, j: usize, k: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == j && c == k {
                Complex::new(F::one(), F::zero())
            } else {
                Complex::new(F::zero(), F::zero())
            }
        })
    }

    /// Build from nested rows of `(re, im)` pairs; convenient in tests.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput {
                reason: "ragged row lengths".into(),
            });
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&(re, im)| crate::scalar::cplx(re, im))
            .collect();
        Self::new(r, c, data)
    }

    fn check_finite(&self) -> Result<()> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self.data[r * self.cols + c];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C<F> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, z: C<F>) {
        self.data[r * self.cols + c] = z;
    }

    pub fn entries(&self) -> impl Iterator<Item = &C<F>> {
        self.data.iter()
    }

    pub fn row(&self, r: usize) -> &[C<F>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn scale(&self, z: C<F>) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * z).collect(),
        }
    }

    pub fn scale_re(&self, s: F) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Complex::conj).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Conjugate transpose A†.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> C<F> {
        let n = self.rows.min(self.cols);
        (0..n)
            .map(|i| self.get(i, i))
            .fold(Complex::new(F::zero(), F::zero()), |a, b| a + b)
    }

    /// Tr(A·B) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C<F>> {
        if self.cols != other.rows || other.cols != self.rows {
            return Err(Error::dim_mismatch(
                "trace_product",
                (self.rows, self.cols),
                (other.rows, other.cols),
            ));
        }
        let mut acc = Complex::new(F::zero(), F::zero());
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc = acc + self.get(i, j) * other.get(j, i);
            }
        }
        Ok(acc)
    }

    /// Hilbert–Schmidt inner product Tr(A†B).
    pub fn hs_inner(&self, other: &Self) -> Result<C<F>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim_mismatch(
                "hs_inner",
                (self.rows, self.cols),
                (other.rows, other.cols),
            ));
        }
        let mut acc = Complex::new(F::zero(), F::zero());
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            acc = acc + a.conj() * b;
        }
        Ok(acc)
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> F {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(F::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> F {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(F::zero(), F::max)
    }

    /// Induced 1-norm: max absolute column sum.
    pub fn one_norm(&self) -> F {
        let mut best = F::zero();
        for c in 0..self.cols {
            let mut s = F::zero();
            for r in 0..self.rows {
                s = s + self.get(r, c).norm();
            }
            best = best.max(s);
        }
        best
    }

    /// Largest entry magnitude of A − B.
    pub fn max_diff(&self, other: &Self) -> F {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(F::zero(), F::max)
    }

    /// Max entrywise deviation from hermiticity, max |A_{jk} − conj(A_{kj})|.
    pub fn hermiticity_deviation(&self) -> F {
        debug_assert!(self.is_square());
        let mut dev = F::zero();
        for r in 0..self.rows {
            for c in 0..self.cols {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    /// Column-stacked coordinates: column 1 top-to-bottom, then column 2, …
    ///
    /// Exact entry copies, so `devectorize(vectorize(M)) == M` bit for bit.
    pub fn vectorize(&self) -> Result<Vec<C<F>>> {
        self.require_square()?;
        let n = self.rows;
        let mut v = Vec::with_capacity(n * n);
        for c in 0..n {
            for r in 0..n {
                v.push(self.get(r, c));
            }
        }
        Ok(v)
    }

    /// Inverse of [`vectorize`](Self::vectorize); the length must be a
    /// perfect square.
    pub fn devectorize(v: &[C<F>]) -> Result<Self> {
        let n = (v.len() as f64).sqrt().round() as usize;
        if n * n != v.len() {
            return Err(Error::BadShape {
                len: v.len(),
                rows: n,
                cols: n,
            });
        }
        Ok(Self::from_fn(n, n, |r, c| v[c * n + r]))
    }

    /// Kronecker product A ⊗ B.
    pub fn kron(&self, other: &Self) -> Self {
        let (m, n) = (self.rows, self.cols);
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(m * p, n * q, |r, c| {
            self.get(r / p, c / q) * other.get(r % p, c % q)
        })
    }

    /// Matrix-vector product.
    pub fn apply_vec(&self, v: &[C<F>]) -> Result<Vec<C<F>>> {
        if v.len() != self.cols {
            return Err(Error::dim_mismatch(
                "apply_vec",
                (self.rows, self.cols),
                (v.len(), 1),
            ));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = Complex::new(F::zero(), F::zero());
            for c in 0..self.cols {
                acc = acc + self.get(r, c) * v[c];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Stack row vectors into a matrix; all rows must share a length.
    pub fn from_stacked_rows(rows: &[Vec<C<F>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput {
                reason: "ragged row lengths in row stack".into(),
            });
        }
        let data = rows.iter().flatten().copied().collect();
        ComplexMatrix::new(r, c, data)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.re == F::zero() && a.im == F::zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }
}

impl<F: Scalar> Index<(usize, usize)> for ComplexMatrix<F> {
    type Output = C<F>;

    fn index(&self, (r, c): (usize, usize)) -> &C<F> {
        &self.data[r * self.cols + c]
    }
}

impl<F: Scalar> Add for &ComplexMatrix<F> {
    type Output = ComplexMatrix<F>;

    fn add(self, other: &ComplexMatrix<F>) -> ComplexMatrix<F> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch in matrix sum"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<F: Scalar> Sub for &ComplexMatrix<F> {
    type Output = ComplexMatrix<F>;

    fn sub(self, other: &ComplexMatrix<F>) -> ComplexMatrix<F> {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch in matrix difference"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<F: Scalar> Neg for &ComplexMatrix<F> {
    type Output = ComplexMatrix<F>;

    fn neg(self) -> ComplexMatrix<F> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -*a).collect(),
        }
    }
}

impl<F: Scalar> Mul for &ComplexMatrix<F> {
    type Output = ComplexMatrix<F>;

    fn mul(self, other: &ComplexMatrix<F>) -> ComplexMatrix<F> {
        self.mul_impl(other)
    }
}

impl<F: Scalar> fmt::Debug for ComplexMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(
                    f,
                    "{:+.4e}{:+.4e}i ",
                    crate::scalar::to_f64(z.re),
                    crate::scalar::to_f64(z.im)
                )?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Commutator [A, B] = AB − BA.
pub fn commutator<F: Scalar>(a: &ComplexMatrix<F>, b: &ComplexMatrix<F>) -> ComplexMatrix<F> {
    &(a * b) - &(b * a)
}

/// Anticommutator {A, B} = AB + BA.
pub fn anticommutator<F: Scalar>(a: &ComplexMatrix<F>, b: &ComplexMatrix<F>) -> ComplexMatrix<F> {
    &(a * b) + &(b * a)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<F: Scalar>(v: &[C<F>]) -> F {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(F::zero(), |a, b| a + b)
        .sqrt()
}

/// Conjugated dot product v†w.
pub fn vec_dot<F: Scalar>(v: &[C<F>], w: &[C<F>]) -> C<F> {
    debug_assert_eq!(v.len(), w.len());
    v.iter()
        .zip(w.iter())
        .map(|(a, b)| a.conj() * b)
        .fold(Complex::new(F::zero(), F::zero()), |a, b| a + b)
}
