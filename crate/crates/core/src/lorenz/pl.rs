//! Monotone piecewise-linear homeomorphisms of `[0, 1]`.

use crate::error::{Error, Result};
use crate::numeric::Real;

/// Increasing piecewise-linear bijection of `[0, 1]` given by its nodes.
///
/// The first node is `(0, 0)`, the last `(1, 1)`, and both coordinates are
/// strictly increasing. Two nodes encode the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PlHomeo<S> {
    xs: Vec<S>,
    ys: Vec<S>,
}

impl<S: Real> PlHomeo<S> {
    pub fn new(xs: Vec<S>, ys: Vec<S>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidArgument(format!(
                "homeomorphism has {} x-nodes but {} y-nodes",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidArgument(
                "homeomorphism needs at least two nodes".into(),
            ));
        }
        let n = xs.len();
        let zero = xs[0].zero_like();
        let one = xs[0].one_like();
        if xs[0] != zero || ys[0] != zero || xs[n - 1] != one || ys[n - 1] != one {
            return Err(Error::InvalidArgument(
                "homeomorphism must map 0 to 0 and 1 to 1".into(),
            ));
        }
        for i in 1..n {
            if !(xs[i] > xs[i - 1]) || !(ys[i] > ys[i - 1]) {
                return Err(Error::InvalidArgument(format!(
                    "homeomorphism nodes not strictly increasing at index {i}"
                )));
            }
        }
        Ok(PlHomeo { xs, ys })
    }

    /// Nodes at `x = i/(n−1)` with the given values; the first and last
    /// values must be `0` and `1`.
    pub fn on_uniform_grid(ys: Vec<S>) -> Result<Self> {
        let n = ys.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "homeomorphism needs at least two nodes".into(),
            ));
        }
        let xs = uniform_nodes(&ys[0], n);
        Self::new(xs, ys)
    }

    /// The identity sampled on `n` uniform nodes.
    pub fn identity(like: &S, n: usize) -> Self {
        let n = n.max(2);
        let xs = uniform_nodes(like, n);
        PlHomeo { ys: xs.clone(), xs }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xs(&self) -> &[S] {
        &self.xs
    }

    pub fn ys(&self) -> &[S] {
        &self.ys
    }

    pub fn is_identity(&self) -> bool {
        self.xs.iter().zip(&self.ys).all(|(x, y)| x == y)
    }

    /// Index `i` of the segment `[t[i], t[i+1]]` containing `v`, clamped to
    /// the first and last segments.
    fn segment(t: &[S], v: &S) -> usize {
        let n = t.len();
        // first index with t[i] > v, minus one
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if t[mid] <= *v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn interpolate(from: &[S], to: &[S], v: &S) -> S {
        if from.len() == 2 && from[0] == to[0] && from[1] == to[1] {
            return v.clone();
        }
        let i = Self::segment(from, v);
        let slope = (to[i + 1].clone() - &to[i]) / (from[i + 1].clone() - &from[i]);
        to[i].clone() + &(slope * &(v.clone() - &from[i]))
    }

    /// `φ(x)`; arguments outside `[0, 1]` extrapolate along the end segments.
    pub fn eval(&self, x: &S) -> S {
        Self::interpolate(&self.xs, &self.ys, x)
    }

    /// `φ⁻¹(y)`, exact on each linear piece.
    pub fn inverse(&self, y: &S) -> S {
        Self::interpolate(&self.ys, &self.xs, y)
    }

    /// Interior node values `y_1, …, y_{n−2}` (the free coordinates).
    pub fn interior_values(&self) -> &[S] {
        &self.ys[1..self.ys.len() - 1]
    }

    /// Converts every node into another scalar type.
    pub fn map_scalars<T: Real>(&self, mut convert: impl FnMut(&S) -> T) -> PlHomeo<T> {
        PlHomeo {
            xs: self.xs.iter().map(&mut convert).collect(),
            ys: self.ys.iter().map(&mut convert).collect(),
        }
    }

    /// Largest `|φ(x_i) − ψ(x_i)|` over the nodes of both maps.
    pub fn sup_distance(&self, other: &PlHomeo<S>) -> S {
        let mut d = self.xs[0].zero_like();
        for x in self.xs.iter().chain(other.xs.iter()) {
            d = d.max_of((self.eval(x) - &other.eval(x)).abs());
        }
        d
    }

    /// Builds a homeomorphism from node values without validation. Used by
    /// the renormalization code where the values come out of a monotone
    /// composition and the endpoints are pinned.
    pub(crate) fn from_parts_unchecked(xs: Vec<S>, ys: Vec<S>) -> Self {
        PlHomeo { xs, ys }
    }
}

/// `i/(n−1)` for `i = 0..n`, endpoints exact.
pub fn uniform_nodes<S: Real>(like: &S, n: usize) -> Vec<S> {
    let denom = like.lift((n - 1) as f64);
    (0..n)
        .map(|i| {
            if i == 0 {
                like.zero_like()
            } else if i == n - 1 {
                like.one_like()
            } else {
                like.lift(i as f64) / &denom
            }
        })
        .collect()
}
