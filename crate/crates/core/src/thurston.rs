//! Pullback iteration realizing a renormalization type inside the
//! two-parameter family `v ↦ F(c, v, φ)`.
//!
//! Shadow orbits `x_k` of length `m = |ω|` are pulled back through the
//! branch inverses of `F(c, (x0(1), x1(1)), φ)` along the boundary
//! itineraries of the type. The last point closes the orbit: at `c`
//! (classic), or at a prescribed position inside the candidate return
//! interval `[x0(n1−1), x1(n0−1)]` (modified).

use crate::combinatorics::{Branch, RenormType};
use crate::error::{Error, Result};
use crate::lorenz::{LorenzRep, RangePolicy};
use crate::numeric::{jacobian, Dual, Real};

/// How the last shadow-orbit point is set in each sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum Closure<S> {
    /// `y_k(m−1) = c`
    Classic,
    /// `y_k(m−1) = p0 + (p1 − p0)·v_k` with the current boundary values, so
    /// the realization keeps its boundary values under renormalization.
    FixedBoundary,
    /// `y_k(m−1) = p0 + (p1 − p0)·t_k` for fixed `(t0, t1)`.
    Relative(S, S),
}

#[derive(Clone, Debug)]
pub struct ThurstonOptions<S> {
    pub tol: S,
    pub max_iter: usize,
    /// Sweeps during which out-of-range pullbacks are clamped.
    pub warmup: usize,
    /// Give up when the step has not halved for this many sweeps.
    pub patience: usize,
    /// After reaching `tol`, keep sweeping while the step still shrinks
    /// (down to the rounding floor).
    pub polish: bool,
}

impl<S: Real> ThurstonOptions<S> {
    /// `tol = 2^(30−P)` at the precision of `like`.
    pub fn for_precision(like: &S) -> Self {
        ThurstonOptions {
            tol: like.pow2(30 - like.precision() as i32),
            max_iter: 100_000,
            warmup: 50,
            patience: 2_000,
            polish: false,
        }
    }
}

/// Candidate orbits of the boundary points `0` and `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowOrbits<S> {
    pub x0: Vec<S>,
    pub x1: Vec<S>,
}

impl<S: Real> ShadowOrbits<S> {
    /// Uniformly spaced: `x0` from 0 up to `c`, `x1` from 1 down to `c`.
    pub fn initial(c: &S, m: usize) -> Self {
        let one = c.one_like();
        let steps = c.lift((m - 1) as f64);
        let x0 = (0..m)
            .map(|j| c.clone() * &c.lift(j as f64) / &steps)
            .collect();
        let x1 = (0..m)
            .map(|j| one.clone() - &((one.clone() - c) * &c.lift(j as f64) / &steps))
            .collect();
        ShadowOrbits { x0, x1 }
    }

    pub fn len(&self) -> usize {
        self.x0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x0.is_empty()
    }

    pub fn get(&self, k: Branch) -> &[S] {
        match k {
            Branch::Left => &self.x0,
            Branch::Right => &self.x1,
        }
    }

    /// Largest `|x_k(j+1) − f(x_k(j))|` along the boundary itineraries;
    /// zero for genuine orbits.
    pub fn orbit_defect(&self, f: &LorenzRep<S>, t: &RenormType) -> Result<S> {
        let mut worst = f.c().zero_like();
        for k in [Branch::Left, Branch::Right] {
            let xs = self.get(k);
            for (j, side) in t.boundary_itinerary(k).into_iter().enumerate() {
                let image = f.eval(&xs[j], side)?;
                worst = worst.max_of((image - &xs[j + 1]).abs());
            }
        }
        Ok(worst)
    }
}

/// A converged pullback.
#[derive(Clone, Debug)]
pub struct Realization<S> {
    pub map: LorenzRep<S>,
    pub orbits: ShadowOrbits<S>,
    pub iterations: usize,
    pub last_step: S,
}

/// Runs the pullback in the family through `family` (its `c`, `φ` and `α`
/// are kept; its boundary values are ignored).
///
/// `start` warm-starts from earlier shadow orbits of the same length.
pub fn thurston<S: Real>(
    family: &LorenzRep<S>,
    t: &RenormType,
    closure: &Closure<S>,
    opts: &ThurstonOptions<S>,
    start: Option<&ShadowOrbits<S>>,
) -> Result<Realization<S>> {
    let c = family.c();
    let zero = c.zero_like();
    let one = c.one_like();
    if let Closure::Relative(t0, t1) = closure {
        if !(*t0 >= zero && *t0 <= one && *t1 >= zero && *t1 <= one) {
            return Err(Error::InvalidArgument(
                "relative boundary parameters must lie in [0,1]".into(),
            ));
        }
    }
    let sweeper = Sweeper {
        family,
        closure,
        its: [
            t.boundary_itinerary(Branch::Left),
            t.boundary_itinerary(Branch::Right),
        ],
        return_times: t.return_times(),
    };
    let mut x = match start {
        Some(s) if s.len() == t.len() => s.clone(),
        _ => ShadowOrbits::initial(c, t.len()),
    };
    // best iterate after warm-up, with its step
    let mut best: Option<(ShadowOrbits<S>, S)> = None;
    let mut since_best = 0usize;
    let mut last_step = one.clone();
    let mut sweeps = 0;
    let mut newton_below = c.lift(NEWTON_SWITCH);
    let floor = opts.tol.clone() * &c.lift(NOISE_SLACK);

    for iter in 0..opts.max_iter {
        sweeps = iter + 1;
        let policy = if iter < opts.warmup {
            RangePolicy::Clamp
        } else {
            RangePolicy::Strict
        };
        let (next, step) = sweeper.sweep(&x, policy, iter)?;
        x = next;
        last_step = step.clone();
        if step < opts.tol {
            return sweeper.finish(x, step, iter + 1, opts.polish);
        }
        if iter >= opts.warmup && step < newton_below {
            newton_below = step.clone() * &c.lift(NEWTON_RETRY);
            if let Some(shot) = sweeper.newton(&x, &opts.tol, &floor) {
                // one sweep confirms the shot orbits are a fixed point
                if let Ok((next, step)) = sweeper.sweep(&shot, RangePolicy::Strict, iter) {
                    if step < floor {
                        return sweeper.finish(next, step, iter + 2, opts.polish);
                    }
                }
            }
        }
        if iter >= opts.warmup {
            match &best {
                Some((_, b)) if step.clone() * &c.lift(2.0) > *b => {
                    since_best += 1;
                    if since_best > opts.patience {
                        break;
                    }
                }
                _ => {
                    best = Some((x.clone(), step));
                    since_best = 0;
                }
            }
        }
    }
    // rounding noise in long orbits can hold the step just above tol
    if let Some((bx, bstep)) = best {
        if bstep < floor {
            return sweeper.finish(bx, bstep, sweeps, opts.polish);
        }
    }
    Err(Error::NonConvergence {
        iterations: sweeps,
        last_step: last_step.to_f64(),
    })
}

/// Step below which the sweeps hand over to Newton on the shooting
/// equations, and the factor the step must shrink by before another try.
const NEWTON_SWITCH: f64 = 1e-2;
const NEWTON_RETRY: f64 = 1e-2;
const NEWTON_MAX: usize = 60;

/// Factor over `tol` within which a stalled run still counts as converged.
/// Orbits passing close to a critical value amplify rounding by up to
/// ~2^51 ulp, which can put the attainable step above `tol`.
const NOISE_SLACK: f64 = 4294967296.0;

struct Sweeper<'a, S> {
    family: &'a LorenzRep<S>,
    closure: &'a Closure<S>,
    its: [Vec<Branch>; 2],
    return_times: (usize, usize),
}

impl<S: Real> Sweeper<'_, S> {
    fn realization(&self, x: &ShadowOrbits<S>) -> LorenzRep<S> {
        self.family.with_parameters_unchecked(
            self.family.c().clone(),
            x.x0[1].clone(),
            x.x1[1].clone(),
        )
    }

    /// One pullback of both shadow orbits; returns them with the sup-norm
    /// of the change.
    fn sweep(
        &self,
        x: &ShadowOrbits<S>,
        policy: RangePolicy,
        iter: usize,
    ) -> Result<(ShadowOrbits<S>, S)> {
        let m = x.len();
        let (n0, n1) = self.return_times;
        let c = self.family.c();
        let zero = c.zero_like();
        let one = c.one_like();
        let f = self.realization(x);
        let p0 = &x.x0[n1 - 1];
        let p1 = &x.x1[n0 - 1];
        let mut step = zero.clone();
        let mut next = ShadowOrbits {
            x0: Vec::new(),
            x1: Vec::new(),
        };
        for k in [Branch::Left, Branch::Right] {
            let xs = x.get(k);
            let target = match self.closure {
                Closure::Classic => None,
                Closure::FixedBoundary => Some(&xs[1]),
                Closure::Relative(t0, t1) => Some(if k == Branch::Left { t0 } else { t1 }),
            };
            let last = match target {
                None => c.clone(),
                Some(tk) => p0.clone() + &((p1.clone() - p0) * tk),
            };
            let last = if last < zero || last > one {
                if policy == RangePolicy::Strict {
                    return Err(Error::Inconsistent(format!(
                        "closing point {:?} of x{k} left [0,1] after {iter} sweeps",
                        last.to_f64()
                    )));
                }
                last.max_of(zero.clone()).min_of(one.clone())
            } else {
                last
            };
            // y(j−1) = f⁻¹(x(j)); y(0) = k holds by construction
            let mut ys = Vec::with_capacity(m);
            ys.push(if k == Branch::Left {
                zero.clone()
            } else {
                one.clone()
            });
            for j in 2..m {
                let y = f
                    .inverse_branch(&xs[j], self.its[k.index()][j - 1], policy)
                    .map_err(|e| {
                        Error::Inconsistent(format!(
                            "pullback of x{k}({j}) after {iter} sweeps: {e}"
                        ))
                    })?;
                ys.push(y);
            }
            ys.push(last);
            for (a, b) in xs.iter().zip(ys.iter()) {
                step = step.max_of((a.clone() - b).abs());
            }
            match k {
                Branch::Left => next.x0 = ys,
                Branch::Right => next.x1 = ys,
            }
        }
        if !step.is_finite() {
            return Err(Error::Inconsistent(
                "shadow orbits became non-finite".into(),
            ));
        }
        Ok((next, step))
    }

    /// Sweeps on until the step stops shrinking; returns the iterate with
    /// the smallest step and the number of extra sweeps.
    fn polish(&self, mut x: ShadowOrbits<S>, mut best: S) -> Result<(ShadowOrbits<S>, usize)> {
        const STALL: usize = 8;
        const CAP: usize = 2_000;
        let mut best_x = x.clone();
        let mut stalled = 0;
        let mut extra = 0;
        while stalled < STALL && extra < CAP && best > best.zero_like() {
            let (next, step) = self.sweep(&x, RangePolicy::Strict, usize::MAX)?;
            extra += 1;
            x = next;
            if step < best {
                best = step;
                best_x = x.clone();
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
        Ok((best_x, extra))
    }

    /// Newton on the shooting form of the sweep fixed point, started from
    /// `x`. Runs until the residual is below `tol` or stops dropping;
    /// `None` unless it ends below `accept`.
    fn newton(&self, x: &ShadowOrbits<S>, tol: &S, accept: &S) -> Option<ShadowOrbits<S>> {
        let (n0, n1) = self.return_times;
        let mut z = vec![x.x0[1].clone(), x.x1[1].clone()];
        if *self.closure != Closure::Classic {
            z.push(x.x0[n1 - 1].clone());
            z.push(x.x1[n0 - 1].clone());
        }
        let lifted = self.family.map_scalars(|s| Dual::constant(s.clone()));
        let closure = match self.closure {
            Closure::Classic => Closure::Classic,
            Closure::FixedBoundary => Closure::FixedBoundary,
            Closure::Relative(t0, t1) => {
                Closure::Relative(Dual::constant(t0.clone()), Dual::constant(t1.clone()))
            }
        };
        let like = self.family.c();
        let floor = like.pow2(10 - like.precision() as i32);
        let half = like.lift(0.5);
        let norm = |r: &[S]| {
            r.iter()
                .fold(like.zero_like(), |a, b| a.max_of(b.clone().abs()))
        };
        let (_, mut res) =
            shoot(self.family, &self.its, self.return_times, self.closure, &z).ok()?;
        let mut size = norm(&res);
        let done = |z: &[S], size: &S| {
            if size < accept {
                shoot(self.family, &self.its, self.return_times, self.closure, z)
                    .ok()
                    .map(|(o, _)| o)
            } else {
                None
            }
        };
        for _ in 0..NEWTON_MAX {
            if size < *tol {
                return done(&z, &size);
            }
            let jac = jacobian(
                |d| shoot(&lifted, &self.its, self.return_times, &closure, d).map(|(_, r)| r),
                &z,
            )
            .ok()?;
            let rhs: Vec<S> = res.iter().map(|r| -r.clone()).collect();
            let dz = jac.solve(&rhs, &floor)?;
            // halve the step until the residual drops
            let mut scale = like.one_like();
            let mut accepted = false;
            for _ in 0..12 {
                let trial: Vec<S> = z
                    .iter()
                    .zip(&dz)
                    .map(|(a, d)| a.clone() + &(d.clone() * &scale))
                    .collect();
                if let Ok((_, r)) = shoot(
                    self.family,
                    &self.its,
                    self.return_times,
                    self.closure,
                    &trial,
                ) {
                    let n = norm(&r);
                    if n < size {
                        z = trial;
                        res = r;
                        size = n;
                        accepted = true;
                        break;
                    }
                }
                scale = scale * &half;
            }
            if !accepted {
                return done(&z, &size);
            }
        }
        None
    }

    fn finish(
        &self,
        x: ShadowOrbits<S>,
        step: S,
        sweeps: usize,
        polish: bool,
    ) -> Result<Realization<S>> {
        let (x, extra) = if polish {
            self.polish(x, step.clone())?
        } else {
            (x, 0)
        };
        let m = self.realization(&x);
        let map = LorenzRep::new(
            m.c().clone(),
            m.v0().clone(),
            m.v1().clone(),
            m.phi0().clone(),
            m.phi1().clone(),
            m.alpha().clone(),
        )?;
        Ok(Realization {
            map,
            orbits: x,
            iterations: sweeps + extra,
            last_step: step,
        })
    }
}

/// Pulls the closing points back along the boundary itineraries in the map
/// with boundary values `z[0..2]`; `z[2..4]` are the return-interval
/// endpoints the closure uses. Returns the orbits and the mismatch of
/// `z` with what the orbits reproduce.
fn shoot<T: Real>(
    family: &LorenzRep<T>,
    its: &[Vec<Branch>; 2],
    (n0, n1): (usize, usize),
    closure: &Closure<T>,
    z: &[T],
) -> Result<(ShadowOrbits<T>, Vec<T>)> {
    let c = family.c();
    let m = its[0].len() + 1;
    let f = family.with_parameters_unchecked(c.clone(), z[0].clone(), z[1].clone());
    let mut orbits = ShadowOrbits {
        x0: Vec::new(),
        x1: Vec::new(),
    };
    for k in [Branch::Left, Branch::Right] {
        let last = match closure {
            Closure::Classic => c.clone(),
            Closure::FixedBoundary => z[2].clone() + &((z[3].clone() - &z[2]) * &z[k.index()]),
            Closure::Relative(t0, t1) => {
                let tk = if k == Branch::Left { t0 } else { t1 };
                z[2].clone() + &((z[3].clone() - &z[2]) * tk)
            }
        };
        if !(last >= c.zero_like() && last <= c.one_like()) {
            return Err(Error::Range("closing point outside [0,1]".into()));
        }
        let mut ys = vec![c.zero_like(); m];
        ys[0] = if k == Branch::Left {
            c.zero_like()
        } else {
            c.one_like()
        };
        ys[m - 1] = last;
        for j in (2..m).rev() {
            ys[j - 1] = f.inverse_branch(&ys[j], its[k.index()][j - 1], RangePolicy::Strict)?;
        }
        match k {
            Branch::Left => orbits.x0 = ys,
            Branch::Right => orbits.x1 = ys,
        }
    }
    let mut res = vec![orbits.x0[1].clone() - &z[0], orbits.x1[1].clone() - &z[1]];
    if z.len() == 4 {
        res.push(orbits.x0[n1 - 1].clone() - &z[2]);
        res.push(orbits.x1[n0 - 1].clone() - &z[3]);
    }
    Ok((orbits, res))
}

/// Realization whose candidate return map has relative boundary values
/// `(t0, t1)`. Sweeping `(t0, t1)` over `[0,1]²` traces out the domain of
/// `t`-renormalizability in the family.
pub fn thurston_domain_probe<S: Real>(
    family: &LorenzRep<S>,
    t: &RenormType,
    t0: S,
    t1: S,
    opts: &ThurstonOptions<S>,
) -> Result<Realization<S>> {
    thurston(family, t, &Closure::Relative(t0, t1), opts, None)
}
