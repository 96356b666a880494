//! Multiprecision scalar backed by MPFR.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{Pow, PowAssign};
use rug::Float;

use super::real::{Real, RealFunctions};
use crate::error::{Error, Result};

/// Smallest precision accepted for [`Mp`] values.
pub const MIN_PRECISION: u32 = 53;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// A real number with a per-value mantissa precision of at least 53 bits.
///
/// Binary operations run at the larger precision of the two operands and
/// round to nearest, so results are deterministic for identical inputs.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mp(Float);

impl Mp {
    pub fn new(precision: u32, value: f64) -> Self {
        Mp(Float::with_val(precision.max(MIN_PRECISION), value))
    }

    /// Parses a decimal literal (`"0.142709"`, `"-1.5e-3"`, ...).
    pub fn parse(precision: u32, text: &str) -> Result<Self> {
        let precision = check_precision(precision)?;
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::InvalidArgument(format!("bad decimal `{text}`: {e}")))?;
        Ok(Mp(Float::with_val(precision, parsed)))
    }

    pub fn from_float(value: Float) -> Self {
        if value.prec() < MIN_PRECISION {
            Mp(Float::with_val(MIN_PRECISION, value))
        } else {
            Mp(value)
        }
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    /// Rounds (or extends) to another precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        Mp(Float::with_val(precision.max(MIN_PRECISION), &self.0))
    }

    /// Decimal digits needed for a bit-faithful round trip at precision `bits`.
    pub fn decimal_digits(bits: u32) -> usize {
        (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    /// Scientific decimal string carrying enough digits to reproduce the value
    /// exactly when parsed back at the same precision.
    pub fn to_decimal(&self) -> String {
        self.0.to_string_radix_round(
            10,
            Some(Self::decimal_digits(self.0.prec())),
            Round::Nearest,
        )
    }
}

/// Validates a requested precision.
pub fn check_precision(precision: u32) -> Result<u32> {
    if precision < MIN_PRECISION || precision > rug::float::prec_max() {
        Err(Error::InvalidArgument(format!(
            "precision must be at least {MIN_PRECISION} bits (got {precision})"
        )))
    } else {
        Ok(precision)
    }
}

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(20)))
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.0.to_string_radix(10, Some(p.max(1)))),
            None => write!(f, "{}", self.to_decimal()),
        }
    }
}

impl PartialEq<f64> for Mp {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Mp {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign:tt) => {
        impl<'a> $trait<&'a Mp> for Mp {
            type Output = Mp;
            fn $method(mut self, rhs: &'a Mp) -> Mp {
                if self.0.prec() >= rhs.0.prec() {
                    self.0 $assign &rhs.0;
                    self
                } else {
                    let prec = rhs.0.prec();
                    self.0.set_prec(prec);
                    self.0 $assign &rhs.0;
                    self
                }
            }
        }

        impl $trait<Mp> for Mp {
            type Output = Mp;
            fn $method(self, rhs: Mp) -> Mp {
                self.$method(&rhs)
            }
        }

        impl<'a, 'b> $trait<&'b Mp> for &'a Mp {
            type Output = Mp;
            fn $method(self, rhs: &'b Mp) -> Mp {
                let prec = self.0.prec().max(rhs.0.prec());
                Mp(Float::with_val(prec, (&self.0).$method(&rhs.0)))
            }
        }
    };
}

binop!(Add, add, +=);
binop!(Sub, sub, -=);
binop!(Mul, mul, *=);
binop!(Div, div, /=);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Real for Mp {
    fn lift(&self, value: f64) -> Self {
        Mp(Float::with_val(self.0.prec(), value))
    }

    fn powf(&self, exponent: &Self) -> Self {
        let prec = self.0.prec().max(exponent.0.prec());
        let mut out = Float::with_val(prec, &self.0);
        // integer and one-half exponents avoid the exp/log route in MPFR
        if exponent.0.is_integer() {
            if let Some(k) = exponent.0.to_i32_saturating() {
                if exponent.0 == k {
                    out.pow_assign(k);
                    return Mp(out);
                }
            }
        }
        if exponent.0 == 0.5 {
            out.sqrt_mut();
            return Mp(out);
        }
        Mp(Float::with_val(prec, (&self.0).pow(&exponent.0)))
    }

    fn sqrt(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), self.0.sqrt_ref()))
    }

    fn ln(&self) -> Self {
        Mp(self.0.clone().ln())
    }

    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn precision(&self) -> u32 {
        self.0.prec()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
}

impl RealFunctions for Mp {
    fn cos(&self) -> Self {
        Mp(self.0.clone().cos())
    }

    fn acos(&self) -> Self {
        Mp(self.0.clone().acos())
    }

    fn atan2(&self, x: &Self) -> Self {
        let prec = self.0.prec().max(x.0.prec());
        Mp(Float::with_val(prec, self.0.atan2_ref(&x.0)))
    }

    fn pi_like(&self) -> Self {
        Mp(Float::with_val(self.0.prec(), rug::float::Constant::Pi))
    }

    fn cbrt(&self) -> Self {
        Mp(self.0.clone().cbrt())
    }
}
