//! The family `F(c, v, φ)` of Lorenz maps.

use crate::combinatorics::{Branch, RenormType};
use crate::error::{Error, Result};
use crate::numeric::Real;

use super::pl::PlHomeo;

/// How [`LorenzRep::inverse_branch`] treats values outside the branch range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangePolicy {
    Strict,
    /// Project into the closed branch range first.
    Clamp,
}

/// The Lorenz map `F(c, v, φ)` with critical exponent `α`.
///
/// Its branches are
///
/// ```text
/// f0(x) = v0 + (1 − v0)·φ0(1 − (1 − x/c)^α)        on [0, c]
/// f1(x) = v1·φ1(((x − c)/(1 − c))^α)               on [c, 1]
/// ```
///
/// so `f0` maps `[0, c]` onto `[v0, 1]` and `f1` maps `[c, 1]` onto `[0, v1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorenzRep<S> {
    c: S,
    v0: S,
    v1: S,
    phi0: PlHomeo<S>,
    phi1: PlHomeo<S>,
    alpha: S,
    inv_alpha: S,
}

impl<S: Real> LorenzRep<S> {
    pub fn new(c: S, v0: S, v1: S, phi0: PlHomeo<S>, phi1: PlHomeo<S>, alpha: S) -> Result<Self> {
        let zero = c.zero_like();
        let one = c.one_like();
        if !(c > zero && c < one) {
            return Err(Error::InvalidArgument(format!(
                "critical point {c:?} not in (0,1)"
            )));
        }
        if !(v0 >= zero && v0 < one) {
            return Err(Error::InvalidArgument(format!("v0 = {v0:?} not in [0,1)")));
        }
        if !(v1 > zero && v1 <= one) {
            return Err(Error::InvalidArgument(format!("v1 = {v1:?} not in (0,1]")));
        }
        if !(alpha > one) {
            return Err(Error::InvalidArgument(format!(
                "critical exponent {alpha:?} must exceed 1"
            )));
        }
        Ok(Self::from_parts_unchecked(c, v0, v1, phi0, phi1, alpha))
    }

    pub(crate) fn from_parts_unchecked(
        c: S,
        v0: S,
        v1: S,
        phi0: PlHomeo<S>,
        phi1: PlHomeo<S>,
        alpha: S,
    ) -> Self {
        let inv_alpha = alpha.one_like() / &alpha;
        LorenzRep {
            c,
            v0,
            v1,
            phi0,
            phi1,
            alpha,
            inv_alpha,
        }
    }

    /// `F(c, v, (id, id))`.
    pub fn with_identity(c: S, v0: S, v1: S, alpha: S) -> Result<Self> {
        let id = PlHomeo::identity(&c, 2);
        Self::new(c, v0, v1, id.clone(), id, alpha)
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn v0(&self) -> &S {
        &self.v0
    }

    pub fn v1(&self) -> &S {
        &self.v1
    }

    pub fn boundary(&self, k: Branch) -> &S {
        match k {
            Branch::Left => &self.v0,
            Branch::Right => &self.v1,
        }
    }

    pub fn phi0(&self) -> &PlHomeo<S> {
        &self.phi0
    }

    pub fn phi1(&self) -> &PlHomeo<S> {
        &self.phi1
    }

    pub fn phi(&self, k: Branch) -> &PlHomeo<S> {
        match k {
            Branch::Left => &self.phi0,
            Branch::Right => &self.phi1,
        }
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// Number of nodes of the diffeomorphism pair (the truncation grid).
    pub fn grid(&self) -> usize {
        self.phi0.len().max(self.phi1.len())
    }

    /// Same map with a different critical point.
    pub fn with_c(&self, c: S) -> Result<Self> {
        Self::new(
            c,
            self.v0.clone(),
            self.v1.clone(),
            self.phi0.clone(),
            self.phi1.clone(),
            self.alpha.clone(),
        )
    }

    pub(crate) fn with_parameters_unchecked(&self, c: S, v0: S, v1: S) -> Self {
        let mut out = self.clone();
        out.c = c;
        out.v0 = v0;
        out.v1 = v1;
        out
    }

    pub(crate) fn with_c_unchecked(&self, c: S) -> Self {
        let mut out = self.clone();
        out.c = c;
        out
    }

    /// Same map with different boundary values.
    pub fn with_boundary(&self, v0: S, v1: S) -> Result<Self> {
        Self::new(
            self.c.clone(),
            v0,
            v1,
            self.phi0.clone(),
            self.phi1.clone(),
            self.alpha.clone(),
        )
    }

    /// Converts all parameters into another scalar type.
    pub fn map_scalars<T: Real>(&self, mut convert: impl FnMut(&S) -> T) -> LorenzRep<T> {
        LorenzRep::from_parts_unchecked(
            convert(&self.c),
            convert(&self.v0),
            convert(&self.v1),
            self.phi0.map_scalars(&mut convert),
            self.phi1.map_scalars(&mut convert),
            convert(&self.alpha),
        )
    }

    /// Value of the branch on `side` at `x`.
    ///
    /// `x = c` is allowed on both sides and gives the one-sided limits
    /// `f0(c) = 1`, `f1(c) = 0`.
    pub fn eval(&self, x: &S, side: Branch) -> Result<S> {
        let zero = self.c.zero_like();
        let one = self.c.one_like();
        match side {
            Branch::Left => {
                if !(*x >= zero && *x <= self.c) {
                    return Err(Error::Domain(format!(
                        "{x:?} outside left branch domain [0, c]"
                    )));
                }
                let s = one.clone() - &(one.clone() - &(x.clone() / &self.c)).powf(&self.alpha);
                let y = self.v0.clone() + &((one.clone() - &self.v0) * &self.phi0.eval(&s));
                Ok(clamp(y, &self.v0, &one))
            }
            Branch::Right => {
                if !(*x >= self.c && *x <= one) {
                    return Err(Error::Domain(format!(
                        "{x:?} outside right branch domain [c, 1]"
                    )));
                }
                let s = ((x.clone() - &self.c) / (one - &self.c)).powf(&self.alpha);
                let y = self.v1.clone() * &self.phi1.eval(&s);
                Ok(clamp(y, &zero, &self.v1))
            }
        }
    }

    /// `f` applied on whichever side of `c` the point lies; `c` itself is an
    /// itinerary error.
    pub fn apply(&self, x: &S) -> Result<S> {
        let side = self.side_of(x).ok_or_else(|| Error::Itinerary {
            step: 0,
            detail: "point hit the critical point".into(),
        })?;
        self.eval(x, side)
    }

    /// Side of `c` a point lies on; `None` at `c`.
    pub fn side_of(&self, x: &S) -> Option<Branch> {
        if *x < self.c {
            Some(Branch::Left)
        } else if *x > self.c {
            Some(Branch::Right)
        } else {
            None
        }
    }

    /// Inverse of the branch `branch` at `y`:
    ///
    /// ```text
    /// f0⁻¹(y) = c·(1 − (1 − φ0⁻¹((y − v0)/(1 − v0)))^(1/α))
    /// f1⁻¹(y) = c + (1 − c)·φ1⁻¹(y/v1)^(1/α)
    /// ```
    pub fn inverse_branch(&self, y: &S, branch: Branch, policy: RangePolicy) -> Result<S> {
        let zero = self.c.zero_like();
        let one = self.c.one_like();
        let (lo, hi) = match branch {
            Branch::Left => (&self.v0, &one),
            Branch::Right => (&zero, &self.v1),
        };
        let y = if *y < *lo || *y > *hi {
            match policy {
                RangePolicy::Strict => {
                    return Err(Error::Range(format!(
                        "{y:?} outside range [{lo:?}, {hi:?}] of branch {branch}"
                    )))
                }
                RangePolicy::Clamp => clamp(y.clone(), lo, hi),
            }
        } else {
            y.clone()
        };
        match branch {
            Branch::Left => {
                let u = self
                    .phi0
                    .inverse(&((y - &self.v0) / (one.clone() - &self.v0)));
                let u = clamp(u, &zero, &one);
                let x = self.c.clone() * &(one.clone() - &(one - &u).powf(&self.inv_alpha));
                Ok(clamp(x, &zero, &self.c))
            }
            Branch::Right => {
                let u = self.phi1.inverse(&(y / &self.v1));
                let u = clamp(u, &zero, &one);
                let x = self.c.clone() + &((one.clone() - &self.c) * &u.powf(&self.inv_alpha));
                Ok(clamp(x, &self.c, &one))
            }
        }
    }

    /// `(x0, x1, …, x_n)` with `x_{j+1} = f_{word[j]}(x_j)`.
    ///
    /// Every point must lie strictly on the side of `c` its symbol names.
    pub fn orbit(&self, x0: &S, word: &[Branch]) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(word.len() + 1);
        out.push(x0.clone());
        self.extend_orbit(&mut out, word, 0)?;
        Ok(out)
    }

    /// Continues `orbit` along `word`, numbering steps from `offset`.
    fn extend_orbit(&self, orbit: &mut Vec<S>, word: &[Branch], offset: usize) -> Result<()> {
        for (j, &side) in word.iter().enumerate() {
            let x = orbit.last().expect("orbit has a start point");
            if self.side_of(x) != Some(side) {
                return Err(Error::Itinerary {
                    step: offset + j,
                    detail: format!(
                        "point {x:?} not strictly on side {side} of c = {:?}",
                        self.c
                    ),
                });
            }
            let next = self.eval(x, side)?;
            orbit.push(next);
        }
        Ok(())
    }

    /// Orbits of the boundary points `0` and `1` along the itineraries
    /// dictated by `t` (see [`RenormType::boundary_itinerary`]), each of
    /// length `|ω|`.
    pub fn boundary_orbits(&self, t: &RenormType) -> Result<[Vec<S>; 2]> {
        let zero = self.c.zero_like();
        let one = self.c.one_like();
        Ok([
            self.orbit(&zero, &t.boundary_itinerary(Branch::Left))?,
            self.orbit(&one, &t.boundary_itinerary(Branch::Right))?,
        ])
    }

    /// Return data of the candidate renormalization of type `t`.
    pub fn return_data(&self, t: &RenormType) -> Result<ReturnData<S>> {
        let [o0, o1] = self.boundary_orbits(t)?;
        Ok(ReturnData::from_orbits(t, o0, o1))
    }

    /// Decides whether `f` is `t`-renormalizable, reporting the first
    /// violated condition otherwise.
    pub fn check_renormalizable(&self, t: &RenormType) -> RenormCheck<S> {
        let (n0, n1) = t.return_times();
        let zero = self.c.zero_like();
        let one = self.c.one_like();
        let it0 = t.boundary_itinerary(Branch::Left);
        let it1 = t.boundary_itinerary(Branch::Right);
        let fail = |msg: String| RenormCheck {
            renormalizable: false,
            diagnostic: Some(msg),
            p0: None,
            p1: None,
        };

        // endpoints of the return interval first
        let mut o0 = vec![zero.clone()];
        if let Err(e) = self.extend_orbit(&mut o0, &it0[..n1 - 1], 0) {
            return fail(format!("orbit of 0 before p0: {e}"));
        }
        let mut o1 = vec![one.clone()];
        if let Err(e) = self.extend_orbit(&mut o1, &it1[..n0 - 1], 0) {
            return fail(format!("orbit of 1 before p1: {e}"));
        }
        let p0 = o0[n1 - 1].clone();
        let p1 = o1[n0 - 1].clone();
        if !(p0 > zero) {
            return fail(format!("p0 = {} not interior", p0.to_f64()));
        }
        if !(p1 < one) {
            return fail(format!("p1 = {} not interior", p1.to_f64()));
        }
        if !(p0 < self.c && self.c < p1) {
            return fail(format!(
                "return interval [{}, {}] does not contain c = {} in its interior",
                p0.to_f64(),
                p1.to_f64(),
                self.c.to_f64()
            ));
        }
        if let Err(e) = self.extend_orbit(&mut o0, &it0[n1 - 1..], n1 - 1) {
            return fail(format!("orbit of p0: {e}"));
        }
        if let Err(e) = self.extend_orbit(&mut o1, &it1[n0 - 1..], n0 - 1) {
            return fail(format!("orbit of p1: {e}"));
        }
        let data = ReturnData::from_orbits(t, o0, o1);

        // returns land in I = [p0, p1]
        let in_i = |x: &S| *x >= p0 && *x <= p1;
        if !in_i(&data.image0) {
            return fail(format!(
                "f^n0(p0) = {} outside return interval",
                data.image0.to_f64()
            ));
        }
        if !in_i(&data.image1) {
            return fail(format!(
                "f^n1(p1) = {} outside return interval",
                data.image1.to_f64()
            ));
        }
        // no earlier return: f^j(I_k) is disjoint from I for 0 < j < n_k
        for (k, n) in [(Branch::Left, n0), (Branch::Right, n1)] {
            for j in 1..n {
                let (a, b) = data.image_of_half(k, j);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                if !(hi < &p0 || lo > &p1) {
                    return fail(format!(
                        "f^{j}(I_{k}) = [{}, {}] meets the return interval before time {n}",
                        lo.to_f64(),
                        hi.to_f64()
                    ));
                }
            }
        }
        RenormCheck {
            renormalizable: true,
            diagnostic: None,
            p0: Some(p0),
            p1: Some(p1),
        }
    }

    /// Iterates `f` directly from points of the return interval until they
    /// come back, as an independent check of the renormalization formulas.
    pub fn first_return_oracle(
        &self,
        t: &RenormType,
        samples: usize,
    ) -> Result<FirstReturnSample<S>> {
        let check = self.check_renormalizable(t);
        if !check.renormalizable {
            return Err(Error::NotRenormalizable(
                check.diagnostic.unwrap_or_default(),
            ));
        }
        if samples < 2 {
            return Err(Error::InvalidArgument(
                "oracle needs at least two samples".into(),
            ));
        }
        let (p0, p1) = (check.p0.expect("checked"), check.p1.expect("checked"));
        let width = p1.clone() - &p0;
        let denom = p0.lift((samples - 1) as f64);
        let xs = (0..samples).map(|i| {
            if i == samples - 1 {
                p1.clone()
            } else {
                p0.clone() + &(width.clone() * &p0.lift(i as f64) / &denom)
            }
        });
        self.first_return_at(t, &p0, &p1, xs)
    }

    /// First returns of the given points (which must lie in `[p0, p1]`).
    pub fn first_return_at(
        &self,
        t: &RenormType,
        p0: &S,
        p1: &S,
        points: impl IntoIterator<Item = S>,
    ) -> Result<FirstReturnSample<S>> {
        let (n0, n1) = t.return_times();
        let cap = n0 + n1;
        let mut out = Vec::new();
        for x in points {
            let Some(side) = self.side_of(&x) else {
                continue;
            };
            let expected = if side == Branch::Left { n0 } else { n1 };
            let mut y = x.clone();
            let mut time = None;
            for j in 1..=cap {
                y = self.apply(&y).map_err(|e| {
                    Error::OracleMismatch(format!("orbit of {} hit c at step {j}: {e}", x.to_f64()))
                })?;
                if y >= *p0 && y <= *p1 {
                    time = Some(j);
                    break;
                }
            }
            match time {
                Some(j) if j == expected => out.push(ReturnPoint {
                    x,
                    image: y,
                    return_time: j,
                }),
                Some(j) => {
                    return Err(Error::OracleMismatch(format!(
                        "{} returned after {j} steps, expected {expected}",
                        x.to_f64()
                    )))
                }
                None => {
                    return Err(Error::OracleMismatch(format!(
                        "{} did not return within {cap} steps",
                        x.to_f64()
                    )))
                }
            }
        }
        Ok(FirstReturnSample {
            p0: p0.clone(),
            p1: p1.clone(),
            points: out,
        })
    }
}

fn clamp<S: Real>(x: S, lo: &S, hi: &S) -> S {
    if x < *lo {
        lo.clone()
    } else if x > *hi {
        hi.clone()
    } else {
        x
    }
}

/// Outcome of [`LorenzRep::check_renormalizable`].
#[derive(Clone, Debug)]
pub struct RenormCheck<S> {
    pub renormalizable: bool,
    /// First violated condition, when not renormalizable.
    pub diagnostic: Option<String>,
    pub p0: Option<S>,
    pub p1: Option<S>,
}

/// Boundary orbits and the quantities read off them.
#[derive(Clone, Debug)]
pub struct ReturnData<S> {
    pub n0: usize,
    pub n1: usize,
    /// Orbit of 0, `|ω|` points.
    pub orbit0: Vec<S>,
    /// Orbit of 1, `|ω|` points.
    pub orbit1: Vec<S>,
    /// `p0 = f^{n1−1}(0)`
    pub p0: S,
    /// `p1 = f^{n0−1}(1)`
    pub p1: S,
    /// `f^{n0}(p0)`
    pub image0: S,
    /// `f^{n1}(p1)`
    pub image1: S,
}

impl<S: Real> ReturnData<S> {
    fn from_orbits(t: &RenormType, orbit0: Vec<S>, orbit1: Vec<S>) -> Self {
        let (n0, n1) = t.return_times();
        let m = n0 + n1;
        ReturnData {
            n0,
            n1,
            p0: orbit0[n1 - 1].clone(),
            p1: orbit1[n0 - 1].clone(),
            image0: orbit0[m - 1].clone(),
            image1: orbit1[m - 1].clone(),
            orbit0,
            orbit1,
        }
    }

    /// Endpoints of `f^j(I_k)` for `1 ≤ j ≤ n_k`, where `I_0 = [p0, c)` and
    /// `I_1 = (c, p1]`.
    pub fn image_of_half(&self, k: Branch, j: usize) -> (&S, &S) {
        match k {
            Branch::Left => (&self.orbit0[self.n1 - 1 + j], &self.orbit1[j - 1]),
            Branch::Right => (&self.orbit0[j - 1], &self.orbit1[self.n0 - 1 + j]),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReturnPoint<S> {
    pub x: S,
    pub image: S,
    pub return_time: usize,
}

/// Sampled first-return map on `[p0, p1]`.
#[derive(Clone, Debug)]
pub struct FirstReturnSample<S> {
    pub p0: S,
    pub p1: S,
    pub points: Vec<ReturnPoint<S>>,
}

impl<S: Real> FirstReturnSample<S> {
    /// The sample rescaled to `[0, 1]`: pairs `(X, G(X))`.
    pub fn rescaled(&self) -> Vec<(S, S)> {
        let width = self.p1.clone() - &self.p0;
        self.points
            .iter()
            .map(|p| {
                (
                    (p.x.clone() - &self.p0) / &width,
                    (p.image.clone() - &self.p0) / &width,
                )
            })
            .collect()
    }
}
