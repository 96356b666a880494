//! Numerical study of the Lorenz renormalization operator.
//!
//! Lorenz maps are represented through the family `F(c, v, φ)`: a critical
//! point `c`, boundary values `v = (v0, v1)` and a pair of piecewise-linear
//! homeomorphisms `φ = (φ0, φ1)` of `[0, 1]`. On top of that the crate
//! provides
//!
//! * renormalization with respect to a prescribed combinatorial type and its
//!   piecewise-linear truncation ([`renorm`]),
//! * the pullback (Thurston) algorithm realizing a type inside the family
//!   `v ↦ F(c, v, φ)` ([`thurston`]),
//! * the fixed-point driver, spectra at fixed points, period-2 search and the
//!   A/B/C classification of monotone types ([`fixedpoint`]).
//!
//! Everything is generic over the scalar type through [`Real`]; the
//! multiprecision [`Mp`] is the default working type and [`Dual`] numbers over
//! it give exact derivatives.

pub mod combinatorics;
pub mod error;
pub mod fixedpoint;
pub mod lorenz;
pub mod numeric;
pub mod renorm;
pub mod thurston;

pub use combinatorics::{Branch, RenormType, Word};
pub use error::{Error, Result};
pub use numeric::{Dual, Matrix, Mp, Real, RealFunctions, SpectralReport};

/// Working scalar: MPFR-backed, 256 bits unless configured otherwise.
pub type Scalar = Mp;
/// Dual numbers over the working scalar.
pub type DualScalar = Dual<Mp>;
/// A Lorenz map at working precision.
pub type Map = lorenz::LorenzRep<Mp>;
/// A piecewise-linear homeomorphism at working precision.
pub type Homeo = lorenz::PlHomeo<Mp>;
/// Double-precision instantiation, for quick exploration and tests.
pub type MapF64 = lorenz::LorenzRep<f64>;
