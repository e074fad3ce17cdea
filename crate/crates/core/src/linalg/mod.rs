//! Dense numerical kernels: LU solve, matrix exponential, SVD, Hermitian
//! eigendecomposition, numerical rank, and minimal-polynomial degree.

mod eigh;
mod expm;
mod lu;
mod minpoly;
mod svd;

pub use eigh::{eigh, Eigh};
pub use expm::expm;
pub use lu::solve;
pub use minpoly::{minimal_poly_degree, MinimalPolyDegree};
pub use svd::{least_squares_min_norm, numerical_rank, svd, LeastSquares, Svd};

