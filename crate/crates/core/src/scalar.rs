//! Scalar abstraction: all numerics are generic over the underlying real
//! floating-point type, with `f64` as the default precision everywhere the
//! library talks to files or the CLI.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` literal into the working scalar type.
#[inline]
pub fn lit<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("literal not representable in scalar type")
}

/// Complex number over the working scalar.
pub type C<F> = Complex<F>;

/// Complex value from `f64` components.
#[inline]
pub fn cplx<F: Scalar>(re: f64, im: f64) -> C<F> {
    Complex::new(lit(re), lit(im))
}

/// `f64` view of a scalar, for error reporting and serialization.
#[inline]
pub fn to_f64<F: Scalar>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
