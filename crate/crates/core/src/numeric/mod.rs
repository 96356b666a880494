//! Scalars, dual numbers and small dense linear algebra.

mod dual;
mod eigen;
mod matrix;
mod mp;
mod real;

pub use dual::Dual;
pub use eigen::{eigenvalues, SpectralReport, EIGEN_MAX_ITERATIONS};
pub use matrix::{jacobian, Matrix};
pub use mp::{check_precision, Mp, DEFAULT_PRECISION, MIN_PRECISION};
pub use num_complex::Complex;
pub use real::{Real, RealFunctions};
