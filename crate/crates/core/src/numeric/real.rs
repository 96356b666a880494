//! The scalar abstraction every computation in the crate is written against.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number type the Lorenz machinery can run on.
///
/// Implemented for `f32`/`f64` (through [`num_traits::Float`]), for the
/// multiprecision [`Mp`](super::Mp) and for [`Dual`](super::Dual) numbers
/// over any of those. Constants are always created *from an existing
/// value* with [`Real::lift`], so they inherit its precision (and, for
/// duals, carry a zero tangent); there is no global precision setting.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// A constant with the same precision as `self`.
    fn lift(&self, value: f64) -> Self;

    /// `self^exponent` for `self >= 0`.
    fn powf(&self, exponent: &Self) -> Self;

    fn sqrt(&self) -> Self;

    fn ln(&self) -> Self;

    fn abs(&self) -> Self;

    /// Nearest `f64` to the (primal) value.
    fn to_f64(&self) -> f64;

    /// Mantissa bits carried by the value.
    fn precision(&self) -> u32;

    fn is_finite(&self) -> bool;

    fn zero_like(&self) -> Self {
        self.lift(0.0)
    }

    fn one_like(&self) -> Self {
        self.lift(1.0)
    }

    /// `2^k` at the precision of `self`.
    fn pow2(&self, k: i32) -> Self {
        self.lift(2f64.powi(k))
    }

    /// Unit roundoff `2^(1-P)` at the precision of `self`.
    fn epsilon(&self) -> Self {
        self.pow2(1 - self.precision() as i32)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Elementary functions needed by the eigenvalue solver. Not required of
/// dual numbers.
pub trait RealFunctions: Real {
    fn cos(&self) -> Self;
    fn acos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn pi_like(&self) -> Self;

    /// Real cube root, defined for negative arguments.
    fn cbrt(&self) -> Self {
        let third = self.one_like() / self.lift(3.0);
        let zero = self.zero_like();
        if *self < zero {
            -self.abs().powf(&third)
        } else {
            self.powf(&third)
        }
    }
}

impl<T> Real for T
where
    T: num_traits::Float + Debug + Send + Sync + 'static + for<'a> Add<&'a T, Output = T>,
    T: for<'a> Sub<&'a T, Output = T> + for<'a> Mul<&'a T, Output = T>,
    T: for<'a> Div<&'a T, Output = T>,
{
    fn lift(&self, value: f64) -> Self {
        T::from(value).expect("f64 constant representable")
    }

    fn powf(&self, exponent: &Self) -> Self {
        num_traits::Float::powf(*self, *exponent)
    }

    fn sqrt(&self) -> Self {
        num_traits::Float::sqrt(*self)
    }

    fn ln(&self) -> Self {
        num_traits::Float::ln(*self)
    }

    fn abs(&self) -> Self {
        num_traits::Float::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn precision(&self) -> u32 {
        // mantissa digits including the implicit bit
        let (mantissa, _, _) = num_traits::Float::integer_decode(T::one());
        64 - mantissa.leading_zeros()
    }

    fn is_finite(&self) -> bool {
        num_traits::Float::is_finite(*self)
    }
}

impl<T> RealFunctions for T
where
    T: Real + num_traits::Float + num_traits::FloatConst,
{
    fn cos(&self) -> Self {
        num_traits::Float::cos(*self)
    }

    fn acos(&self) -> Self {
        num_traits::Float::acos(*self)
    }

    fn atan2(&self, x: &Self) -> Self {
        num_traits::Float::atan2(*self, *x)
    }

    fn pi_like(&self) -> Self {
        T::PI()
    }

    fn cbrt(&self) -> Self {
        num_traits::Float::cbrt(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_precisions() {
        assert_eq!(1.0f64.precision(), 53);
        assert_eq!(1.0f32.precision(), 24);
    }

    #[test]
    fn cube_root_of_negative() {
        assert!((RealFunctions::cbrt(&-27.0f64) + 3.0).abs() < 1e-15);
    }
}
