//! Stroboscopic quantum tomography toolkit.
//!
//! Decides whether an open quantum system evolving under a GKLS master
//! equation can be reconstructed from repeated mean-value measurements of
//! a given observable set, treats arbitrary complex matrices as measurable
//! through their Hermitian decomposition A = Q₁ + iQ₂, and runs the full
//! simulate → measure → reconstruct round trip for the initial state ρ(0).
//!
//! All numerics are generic over the real scalar (`f32`/`f64`) through
//! [`scalar::Scalar`]; the `*64` aliases below are the default precision
//! used by the file formats and the CLI.

pub mod demo;
pub mod dynamics;
pub mod error;
pub mod hermdecomp;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod observability;
pub mod pipeline;
pub mod sampling;
pub mod scalar;
pub mod tol;
pub mod tomography;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use scalar::Scalar;
pub use tol::RankTolerance;

/// Complex scalar at the default precision.
pub type C64 = num_complex::Complex<f64>;
/// Complex scalar at single precision.
pub type C32 = num_complex::Complex<f32>;

pub type ComplexMatrix64 = matrix::ComplexMatrix<f64>;
pub type ComplexMatrix32 = matrix::ComplexMatrix<f32>;
pub type HermitianObservable64 = hermdecomp::HermitianObservable<f64>;
pub type GeneralizedObservable64 = hermdecomp::GeneralizedObservable<f64>;
pub type DensityMatrix64 = dynamics::DensityMatrix<f64>;
pub type GklsGenerator64 = dynamics::GklsGenerator<f64>;
pub type ObservableSet64 = observability::ObservableSet<f64>;
pub type ObservabilityReport64 = observability::ObservabilityReport<f64>;
pub type TimeGrid64 = tomography::TimeGrid<f64>;
pub type MeasurementRecord64 = tomography::MeasurementRecord<f64>;
pub type ReconstructionResult64 = tomography::ReconstructionResult<f64>;
