//! Renormalization of maps in the family `F(c, v, φ)`.
//!
//! For a `t`-renormalizable `f` with return interval `I = [p0, p1]`,
//! `p0 = f^{n1−1}(0)`, `p1 = f^{n0−1}(1)`, the renormalization is again in
//! the family, with
//!
//! ```text
//! c' = (c − p0)/(p1 − p0)
//! v0' = (f^{n0}(p0) − p0)/(p1 − p0)
//! v1' = (f^{n1}(p1) − p0)/(p1 − p0)
//! ```
//!
//! and `φ'_k` the branches of the first-return map with the initial power
//! law stripped off. The truncated operator samples `φ'_k` on a uniform grid.

use crate::combinatorics::{Branch, RenormType};
use crate::error::{Error, Result};
use crate::lorenz::{uniform_nodes, LorenzRep, PlHomeo, ReturnData};
use crate::numeric::Real;

/// Output of [`renormalize`].
#[derive(Clone, Debug)]
pub struct RenormResult<S> {
    pub c: S,
    pub v0: S,
    pub v1: S,
    pub phi0: PlHomeo<S>,
    pub phi1: PlHomeo<S>,
    /// Return interval `[p0, p1]` of the input map.
    pub p0: S,
    pub p1: S,
}

impl<S: Real> RenormResult<S> {
    pub fn params(&self) -> [S; 3] {
        [self.c.clone(), self.v0.clone(), self.v1.clone()]
    }
}

/// Renormalization data of one map, able to evaluate the exact `φ'_k`
/// anywhere (not only on grid nodes).
#[derive(Clone, Debug)]
pub struct Renormalization<'a, S> {
    f: &'a LorenzRep<S>,
    t: &'a RenormType,
    data: ReturnData<S>,
    /// `φ̃0⁻¹(f(p0)) = 1 − (1 − p0/c)^α`
    u0: S,
    /// `φ̃1⁻¹(f(p1)) = ((p1 − c)/(1 − c))^α`
    u1: S,
}

impl<'a, S: Real> Renormalization<'a, S> {
    pub fn new(f: &'a LorenzRep<S>, t: &'a RenormType) -> Result<Self> {
        let check = f.check_renormalizable(t);
        if !check.renormalizable {
            return Err(Error::NotRenormalizable(
                check.diagnostic.unwrap_or_default(),
            ));
        }
        let data = f.return_data(t)?;
        let one = f.c().one_like();
        let u0 = one.clone() - &(one.clone() - &(data.p0.clone() / f.c())).powf(f.alpha());
        let u1 = ((data.p1.clone() - f.c()) / (one - f.c())).powf(f.alpha());
        Ok(Renormalization { f, t, data, u0, u1 })
    }

    pub fn return_data(&self) -> &ReturnData<S> {
        &self.data
    }

    /// `(c', v0', v1')`
    pub fn params(&self) -> [S; 3] {
        let d = &self.data;
        let width = d.p1.clone() - &d.p0;
        [
            (self.f.c().clone() - &d.p0) / &width,
            (d.image0.clone() - &d.p0) / &width,
            (d.image1.clone() - &d.p0) / &width,
        ]
    }

    /// Exact `φ'_k(s)` for `s ∈ [0, 1]`.
    pub fn phi_prime(&self, k: Branch, s: &S) -> Result<S> {
        let d = &self.data;
        let f = self.f;
        let one = f.c().one_like();
        let (n0, n1) = self.t.return_times();
        match k {
            Branch::Left => {
                // f^{n0−1}∘φ̃0 on [u0, 1] → [f^{n0}(p0), p1]
                let z = self.u0.clone() + &((one.clone() - &self.u0) * s);
                let start = f.v0().clone() + &((one - f.v0()) * &f.phi0().eval(&z));
                let end = self.push_forward(start, &self.t.w0().symbols()[1..n0])?;
                Ok((end - &d.image0) / (d.p1.clone() - &d.image0))
            }
            Branch::Right => {
                // f^{n1−1}∘φ̃1 on [0, u1] → [p0, f^{n1}(p1)]
                let z = self.u1.clone() * s;
                let start = f.v1().clone() * &f.phi1().eval(&z);
                let end = self.push_forward(start, &self.t.w1().symbols()[1..n1])?;
                Ok((end - &d.p0) / (d.image1.clone() - &d.p0))
            }
        }
    }

    fn push_forward(&self, start: S, word: &[Branch]) -> Result<S> {
        let mut x = start;
        for &side in word {
            x = self
                .f
                .eval(&x, side)
                .map_err(|e| Error::NotRenormalizable(e.to_string()))?;
        }
        Ok(x)
    }

    /// `φ'_k` sampled on `grid` uniform nodes, endpoints pinned to 0 and 1.
    pub fn sample_phi(&self, k: Branch, grid: usize) -> Result<PlHomeo<S>> {
        let like = self.f.c();
        let xs = uniform_nodes(like, grid);
        if grid == 2 {
            return Ok(PlHomeo::identity(like, 2));
        }
        let mut ys = Vec::with_capacity(grid);
        ys.push(like.zero_like());
        for s in &xs[1..grid - 1] {
            ys.push(self.phi_prime(k, s)?);
        }
        ys.push(like.one_like());
        PlHomeo::new(xs, ys).map_err(|e| Error::ParameterOutOfRange(format!("φ'{k}: {e}")))
    }

    /// Evaluates the renormalized map `F(c', v', φ')` with the exact `φ'` at
    /// a point `X ∈ [0, 1]`.
    pub fn eval_exact(&self, x: &S) -> Result<S> {
        let [c, v0, v1] = self.params();
        let one = c.one_like();
        let alpha = self.f.alpha();
        if *x < c {
            let s = one.clone() - &(one.clone() - &(x.clone() / &c)).powf(alpha);
            Ok(v0.clone() + &((one - &v0) * &self.phi_prime(Branch::Left, &s)?))
        } else if *x > c {
            let s = ((x.clone() - &c) / (one - &c)).powf(alpha);
            Ok(v1 * &self.phi_prime(Branch::Right, &s)?)
        } else {
            Err(Error::Domain(
                "renormalized map is undefined at its critical point".into(),
            ))
        }
    }
}

/// The `t`-renormalization of `f`, with `φ'` sampled on `grid` nodes.
pub fn renormalize<S: Real>(
    f: &LorenzRep<S>,
    t: &RenormType,
    grid: usize,
) -> Result<RenormResult<S>> {
    if grid < 2 {
        return Err(Error::InvalidArgument(
            "truncation grid needs at least 2 nodes".into(),
        ));
    }
    let r = Renormalization::new(f, t)?;
    let [c, v0, v1] = r.params();
    Ok(RenormResult {
        phi0: r.sample_phi(Branch::Left, grid)?,
        phi1: r.sample_phi(Branch::Right, grid)?,
        c,
        v0,
        v1,
        p0: r.data.p0.clone(),
        p1: r.data.p1.clone(),
    })
}

/// The truncated renormalization operator: renormalize, then project `φ'`
/// onto `grid` uniform nodes. `grid = 2` is the three-dimensional
/// truncation acting on `(c, v0, v1)` alone.
pub fn truncated_renormalize<S: Real>(
    f: &LorenzRep<S>,
    t: &RenormType,
    grid: usize,
) -> Result<LorenzRep<S>> {
    let r = renormalize(f, t, grid)?;
    let zero = r.c.zero_like();
    let one = r.c.one_like();
    if !(r.c > zero && r.c < one) {
        return Err(Error::ParameterOutOfRange(format!(
            "c' = {} not in (0,1)",
            r.c.to_f64()
        )));
    }
    if !(r.v0 >= zero && r.v0 < one) || !(r.v1 > zero && r.v1 <= one) {
        return Err(Error::ParameterOutOfRange(format!(
            "v' = ({}, {}) outside [0,1) x (0,1]",
            r.v0.to_f64(),
            r.v1.to_f64()
        )));
    }
    LorenzRep::new(r.c, r.v0, r.v1, r.phi0, r.phi1, f.alpha().clone())
}

/// Unnormalized residual whose zeros are the `(c, v)` fixed by the
/// truncated operator:
///
/// ```text
/// (p0 − c + (p1 − p0)c,  p0 − f^{n0}(p0) + (p1 − p0)v0,  p0 − f^{n1}(p1) + (p1 − p0)v1)
/// ```
///
/// Only the boundary orbits need to follow the itinerary of `t`; full
/// renormalizability is not required.
pub fn modified_renormalize<S: Real>(f: &LorenzRep<S>, t: &RenormType) -> Result<[S; 3]> {
    let d = f.return_data(t)?;
    let width = d.p1.clone() - &d.p0;
    Ok([
        d.p0.clone() - f.c() + &(width.clone() * f.c()),
        d.p0.clone() - &d.image0 + &(width.clone() * f.v0()),
        d.p0.clone() - &d.image1 + &(width * f.v1()),
    ])
}

/// Free coordinates of a map: `c, v0, v1`, then the interior node values
/// of `φ0` and of `φ1`. There are `3 + 2(grid − 2)` of them.
pub fn coordinates<S: Real>(f: &LorenzRep<S>) -> Vec<S> {
    let mut out = vec![f.c().clone(), f.v0().clone(), f.v1().clone()];
    out.extend_from_slice(f.phi0().interior_values());
    out.extend_from_slice(f.phi1().interior_values());
    out
}

/// Inverse of [`coordinates`] on the uniform grid with `grid` nodes.
///
/// No validation is done beyond the coordinate count, so that perturbed
/// and dual-valued coordinates can be evaluated.
pub fn from_coordinates<S: Real>(coords: &[S], grid: usize, alpha: S) -> Result<LorenzRep<S>> {
    let interior = grid.saturating_sub(2);
    if grid < 2 || coords.len() != 3 + 2 * interior {
        return Err(Error::InvalidArgument(format!(
            "{} coordinates do not describe a grid of {grid} nodes",
            coords.len()
        )));
    }
    let like = &coords[0];
    let xs = uniform_nodes(like, grid);
    let homeo = |values: &[S]| {
        let mut ys = Vec::with_capacity(grid);
        ys.push(like.zero_like());
        ys.extend_from_slice(values);
        ys.push(like.one_like());
        PlHomeo::from_parts_unchecked(xs.clone(), ys)
    };
    let phi0 = homeo(&coords[3..3 + interior]);
    let phi1 = homeo(&coords[3 + interior..]);
    Ok(LorenzRep::from_parts_unchecked(
        coords[0].clone(),
        coords[1].clone(),
        coords[2].clone(),
        phi0,
        phi1,
        alpha,
    ))
}

/// The truncated operator in coordinates, for differentiation.
pub fn truncated_renormalize_coords<S: Real>(
    coords: &[S],
    t: &RenormType,
    grid: usize,
    alpha: S,
) -> Result<Vec<S>> {
    let f = from_coordinates(coords, grid, alpha)?;
    let r = renormalize(&f, t, grid)?;
    let mut out = vec![r.c, r.v0, r.v1];
    out.extend_from_slice(r.phi0.interior_values());
    out.extend_from_slice(r.phi1.interior_values());
    Ok(out)
}

/// Sup-norm distance between two maps over parameters and `φ`-nodes.
pub fn sup_distance<S: Real>(f: &LorenzRep<S>, g: &LorenzRep<S>) -> S {
    let mut d = (f.c().clone() - g.c()).abs();
    d = d.max_of((f.v0().clone() - g.v0()).abs());
    d = d.max_of((f.v1().clone() - g.v1()).abs());
    d = d.max_of(f.phi0().sup_distance(g.phi0()));
    d.max_of(f.phi1().sup_distance(g.phi1()))
}
