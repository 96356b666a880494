//! Forward-mode dual numbers with a vector of tangents.
//!
//! A `Dual<S>` is `primal + Σ tangent[i]·εᵢ` with `εᵢεⱼ = 0`. An empty
//! tangent stands for the zero vector, so constants cost no allocation.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::Real;

#[derive(Clone, Debug)]
pub struct Dual<S> {
    pub primal: S,
    pub tangent: Vec<S>,
}

impl<S: Real> Dual<S> {
    pub fn constant(primal: S) -> Self {
        Dual {
            primal,
            tangent: Vec::new(),
        }
    }

    /// The `index`-th of `dim` independent variables, seeded with `e_index`.
    pub fn variable(primal: S, index: usize, dim: usize) -> Self {
        let zero = primal.zero_like();
        let mut tangent = vec![zero; dim];
        tangent[index] = primal.one_like();
        Dual { primal, tangent }
    }

    /// Directional derivative along coordinate `i` (zero if not tracked).
    pub fn derivative(&self, i: usize) -> S {
        self.tangent
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.primal.zero_like())
    }

    fn scale_tangent(tangent: Vec<S>, factor: &S) -> Vec<S> {
        tangent.into_iter().map(|t| t * factor).collect()
    }

    /// `a·self.tangent + b·other.tangent`
    fn combine(self_tan: Vec<S>, a: &S, other_tan: &[S], b: &S) -> Vec<S> {
        let n = self_tan.len().max(other_tan.len());
        let mut out = Vec::with_capacity(n);
        let mut lhs = self_tan.into_iter();
        for i in 0..n {
            let l = lhs.next().map(|t| t * a);
            let r = other_tan.get(i).map(|t| t.clone() * b);
            out.push(match (l, r) {
                (Some(l), Some(r)) => l + r,
                (Some(l), None) => l,
                (None, Some(r)) => r,
                (None, None) => unreachable!(),
            });
        }
        out
    }
}

impl<S: Real> PartialEq for Dual<S> {
    fn eq(&self, other: &Self) -> bool {
        self.primal == other.primal
    }
}

impl<S: Real> PartialOrd for Dual<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.primal.partial_cmp(&other.primal)
    }
}

impl<'a, S: Real> Add<&'a Dual<S>> for Dual<S> {
    type Output = Dual<S>;
    fn add(self, rhs: &'a Dual<S>) -> Dual<S> {
        let mut tangent = self.tangent;
        if tangent.len() < rhs.tangent.len() {
            let zero = self.primal.zero_like();
            tangent.resize(rhs.tangent.len(), zero);
        }
        for (t, r) in tangent.iter_mut().zip(&rhs.tangent) {
            *t = t.clone() + r;
        }
        Dual {
            primal: self.primal + &rhs.primal,
            tangent,
        }
    }
}

impl<'a, S: Real> Sub<&'a Dual<S>> for Dual<S> {
    type Output = Dual<S>;
    fn sub(self, rhs: &'a Dual<S>) -> Dual<S> {
        let mut tangent = self.tangent;
        if tangent.len() < rhs.tangent.len() {
            let zero = self.primal.zero_like();
            tangent.resize(rhs.tangent.len(), zero);
        }
        for (t, r) in tangent.iter_mut().zip(&rhs.tangent) {
            *t = t.clone() - r;
        }
        Dual {
            primal: self.primal - &rhs.primal,
            tangent,
        }
    }
}

impl<'a, S: Real> Mul<&'a Dual<S>> for Dual<S> {
    type Output = Dual<S>;
    fn mul(self, rhs: &'a Dual<S>) -> Dual<S> {
        // (a·b)' = b·a' + a·b'
        let tangent = if rhs.tangent.is_empty() {
            Self::scale_tangent(self.tangent, &rhs.primal)
        } else {
            Self::combine(self.tangent, &rhs.primal, &rhs.tangent, &self.primal)
        };
        Dual {
            primal: self.primal * &rhs.primal,
            tangent,
        }
    }
}

impl<'a, S: Real> Div<&'a Dual<S>> for Dual<S> {
    type Output = Dual<S>;
    fn div(self, rhs: &'a Dual<S>) -> Dual<S> {
        // (a/b)' = a'/b − (a/b)·b'/b
        let inv = rhs.primal.one_like() / &rhs.primal;
        let quotient = self.primal * &inv;
        let tangent = if rhs.tangent.is_empty() {
            Self::scale_tangent(self.tangent, &inv)
        } else {
            let b = -(quotient.clone() * &inv);
            Self::combine(self.tangent, &inv, &rhs.tangent, &b)
        };
        Dual {
            primal: quotient,
            tangent,
        }
    }
}

macro_rules! by_value {
    ($trait:ident, $method:ident) => {
        impl<S: Real> $trait<Dual<S>> for Dual<S> {
            type Output = Dual<S>;
            fn $method(self, rhs: Dual<S>) -> Dual<S> {
                self.$method(&rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl<S: Real> Neg for Dual<S> {
    type Output = Dual<S>;
    fn neg(self) -> Dual<S> {
        Dual {
            primal: -self.primal,
            tangent: self.tangent.into_iter().map(|t| -t).collect(),
        }
    }
}

impl<S: Real> Real for Dual<S> {
    fn lift(&self, value: f64) -> Self {
        Dual::constant(self.primal.lift(value))
    }

    fn powf(&self, exponent: &Self) -> Self {
        let value = self.primal.powf(&exponent.primal);
        let zero = self.primal.zero_like();
        let mut tangent = Vec::new();
        if !self.tangent.is_empty() {
            // d(x^e) = e·x^(e−1)·dx; at x = 0 this vanishes for e > 1
            let factor = if self.primal == zero {
                if exponent.primal > self.primal.one_like() {
                    zero.clone()
                } else {
                    exponent.primal.clone()
                        * &self
                            .primal
                            .powf(&(exponent.primal.clone() - &self.primal.one_like()))
                }
            } else {
                exponent.primal.clone() * &value / &self.primal
            };
            tangent = Self::scale_tangent(self.tangent.clone(), &factor);
        }
        if !exponent.tangent.is_empty() && self.primal > zero {
            // d(x^e) += x^e·ln(x)·de
            let factor = value.clone() * &self.primal.ln();
            tangent = Self::combine(tangent, &self.primal.one_like(), &exponent.tangent, &factor);
        }
        Dual {
            primal: value,
            tangent,
        }
    }

    fn sqrt(&self) -> Self {
        let root = self.primal.sqrt();
        let factor = self.primal.one_like() / (root.clone() * &self.primal.lift(2.0));
        Dual {
            tangent: Self::scale_tangent(self.tangent.clone(), &factor),
            primal: root,
        }
    }

    fn ln(&self) -> Self {
        let inv = self.primal.one_like() / &self.primal;
        Dual {
            primal: self.primal.ln(),
            tangent: Self::scale_tangent(self.tangent.clone(), &inv),
        }
    }

    fn abs(&self) -> Self {
        if self.primal < self.primal.zero_like() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn to_f64(&self) -> f64 {
        self.primal.to_f64()
    }

    fn precision(&self) -> u32 {
        self.primal.precision()
    }

    fn is_finite(&self) -> bool {
        self.primal.is_finite() && self.tangent.iter().all(Real::is_finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Dual::variable(2.0f64, 0, 2);
        let y = Dual::variable(3.0f64, 1, 2);
        let p = x.clone() * &y;
        assert_eq!(p.primal, 6.0);
        assert_eq!(p.tangent, vec![3.0, 2.0]);
        let s = x + y;
        assert_eq!(s.tangent, vec![1.0, 1.0]);
    }

    #[test]
    fn quotient_rule() {
        let x = Dual::variable(2.0f64, 0, 1);
        let q = x.lift(1.0) / x;
        assert!((q.tangent[0] + 0.25).abs() < 1e-15);
    }

    #[test]
    fn real_power_rule() {
        let x = Dual::variable(0.5f64, 0, 1);
        let y = x.powf(&x.lift(2.0));
        assert!((y.tangent[0] - 1.0).abs() < 1e-15);
        let z = x.powf(&x.lift(2.5));
        assert!((z.tangent[0] - 2.5 * 0.5f64.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn power_at_zero_has_zero_slope() {
        let x = Dual::variable(0.0f64, 0, 1);
        let y = x.powf(&x.lift(2.0));
        assert_eq!(y.tangent[0], 0.0);
    }

    #[test]
    fn exponent_tangent() {
        // d/de 2^e at e=3 is 8 ln 2
        let base = Dual::constant(2.0f64);
        let e = Dual::variable(3.0f64, 0, 1);
        let y = base.powf(&e);
        assert!((y.tangent[0] - 8.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn constants_mix_with_variables() {
        let x = Dual::variable(1.5f64, 1, 3);
        let c = x.lift(4.0);
        let y = c - &x;
        assert_eq!(y.tangent, vec![0.0, -1.0, 0.0]);
    }
}
