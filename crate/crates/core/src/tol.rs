//! Validation and rank tolerances, defined once.
//!
//! The stated constants are the contract for `f64`. For other scalar types
//! they are rescaled by the ratio of machine epsilons, so an `f32` build
//! applies the same number of trusted digits relative to its precision.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Max entrywise deviation |A − A†| admitted when certifying hermiticity.
pub const HERMITICITY: f64 = 1e-13;

/// |Tr ρ − 1| admitted at density-matrix construction.
pub const DENSITY_TRACE: f64 = 1e-12;

/// Most negative eigenvalue admitted at density-matrix construction.
pub const DENSITY_EIGENVALUE: f64 = 1e-10;

/// Trace/hermiticity drift admitted for states produced by propagation.
pub const EVOLVED_DRIFT: f64 = 1e-11;

/// Most negative eigenvalue admitted for a state propagated to t ≥ 0.
pub const EVOLVED_EIGENVALUE: f64 = 1e-9;

/// Default relative threshold for numerical rank decisions.
pub const DEFAULT_RANK_REL: f64 = 1e-10;

/// Rescale an `f64` tolerance to the working scalar's precision.
///
/// For `f64` this returns the constant unchanged; for wider-epsilon scalars
/// it grows proportionally to `F::epsilon() / f64::EPSILON`.
#[inline]
pub fn scaled<F: Scalar>(tol: f64) -> F {
    lit::<F>(tol) * (F::epsilon() / lit::<F>(f64::EPSILON))
}

/// Relative threshold used by rank decisions: singular values are counted
/// when they exceed `tol · s_max · max(rows, cols)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance(f64);

impl RankTolerance {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidTolerance { value });
        }
        Ok(RankTolerance(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The threshold in the working scalar type.
    #[inline]
    pub fn threshold<F: Scalar>(self) -> F {
        lit(self.0)
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance(DEFAULT_RANK_REL)
    }
}
