//! Fixed points of the truncated renormalization operator, their spectra,
//! period-2 search and the A/B/C classification of monotone types.
//!
//! The fixed-point driver alternates: realize the type with fixed boundary
//! behaviour in `v ↦ F(c, v, φ)`, take a Newton step on the modified
//! operator and keep its new `c`, realize again, and replace `φ` by the
//! renormalized `φ'`. The `φ`-part of that cycle converges only linearly,
//! so close to the fixed point a chord Newton iteration on all truncated
//! coordinates finishes the job.

use nalgebra::{DMatrix, DVector};

use crate::combinatorics::RenormType;
use crate::error::{Error, Result};
use crate::lorenz::{LorenzRep, PlHomeo};
use crate::numeric::{
    eigenvalues, jacobian, Complex, Dual, Matrix, Real, RealFunctions, SpectralReport,
};
use crate::renorm::{
    coordinates, from_coordinates, modified_renormalize, sup_distance, truncated_renormalize,
    truncated_renormalize_coords,
};
use crate::thurston::{thurston, Closure, ShadowOrbits, ThurstonOptions};

/// Critical points closer than this to 0 or 1 count as degenerate.
pub const C_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct FixedPointOptions<S> {
    /// Nodes of the PL truncation; 2 is the three-dimensional truncation.
    pub grid: usize,
    pub tol: S,
    pub max_outer: usize,
    pub thurston: ThurstonOptions<S>,
}

impl<S: Real> FixedPointOptions<S> {
    /// `tol = 2^(40−P)`, 500 outer cycles.
    pub fn for_precision(like: &S, grid: usize) -> Self {
        FixedPointOptions {
            grid,
            tol: like.pow2(40 - like.precision() as i32),
            max_outer: 500,
            thurston: ThurstonOptions {
                polish: true,
                ..ThurstonOptions::for_precision(like)
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct FixedPointResult<S> {
    pub map: LorenzRep<S>,
    pub renorm_type: RenormType,
    /// Sup-distance between the map and its truncated renormalization.
    pub residual: S,
    pub iterations: usize,
    pub grid: usize,
}

/// One Newton step on the modified operator in `(c, v0, v1)` with `φ`
/// frozen; only the new critical point is kept.
///
/// After a fixed-boundary realization the last two components vanish, so
/// the step in `c` is the Newton step for `p0 − c + (p1 − p0)c` along the
/// curve of realizations rather than along `v = const`.
pub fn newton_step_c<S: Real>(f: &LorenzRep<S>, t: &RenormType) -> Result<S> {
    let c = f.c().clone();
    let point = [c.clone(), f.v0().clone(), f.v1().clone()];
    let base = f.map_scalars(|s| Dual::constant(s.clone()));
    let mut residual = Vec::new();
    let jac = jacobian(
        |x: &[Dual<S>]| -> Result<Vec<Dual<S>>> {
            let lifted = base.with_parameters_unchecked(x[0].clone(), x[1].clone(), x[2].clone());
            let m = modified_renormalize(&lifted, t)?;
            residual = m.iter().map(|d| d.primal.clone()).collect();
            Ok(m.to_vec())
        },
        &point,
    )?;
    let floor = c.pow2(10 - c.precision() as i32);
    let rhs: Vec<S> = residual.iter().map(|r| -r.clone()).collect();
    let step = jac.solve(&rhs, &floor).ok_or_else(|| {
        Error::SingularDerivative(format!("modified operator at c = {}", c.to_f64()))
    })?;
    let next = c + &step[0];
    if !(next > next.zero_like() && next < next.one_like()) {
        return Err(Error::CDegenerate { c: next.to_f64() });
    }
    Ok(next)
}

/// Sup-norm of `R_T f − f` over `(c, v)` and the φ-nodes.
pub fn fixed_point_residual<S: Real>(f: &LorenzRep<S>, t: &RenormType, grid: usize) -> Result<S> {
    let g = truncated_renormalize(f, t, grid)?;
    Ok(sup_distance(f, &g))
}

fn search_failure(phase: &'static str, iterations: usize, cause: Error) -> Error {
    Error::SearchFailure {
        phase,
        iterations,
        cause: Box::new(cause),
    }
}

fn check_margin<S: Real>(c: &S) -> Result<()> {
    let lo = c.lift(C_MARGIN);
    let hi = c.lift(1.0 - C_MARGIN);
    if *c > lo && *c < hi {
        Ok(())
    } else {
        Err(Error::CDegenerate { c: c.to_f64() })
    }
}

/// Runs the fixed-point algorithm from `c_guess` and `φ = (id, id)`.
/// Cycles without the change halving after which a search counts as
/// stalled at its rounding floor.
const STALL_CYCLES: usize = 10;

/// Factor over `tol` within which a stalled search is accepted. Newton in
/// `c` amplifies the realization noise by up to ~2^33.
const NOISE_SLACK: f64 = 1099511627776.0;

pub fn find_fixed_point<S: Real>(
    t: &RenormType,
    alpha: S,
    c_guess: S,
    opts: &FixedPointOptions<S>,
) -> Result<FixedPointResult<S>> {
    if opts.grid < 2 {
        return Err(Error::InvalidArgument(
            "truncation grid needs at least 2 nodes".into(),
        ));
    }
    if !(c_guess > c_guess.zero_like() && c_guess < c_guess.one_like()) {
        return Err(Error::InvalidArgument(
            "initial critical point must lie in (0,1)".into(),
        ));
    }
    let like = c_guess.clone();
    let mut family = LorenzRep::new(
        c_guess,
        like.zero_like(),
        like.one_like(),
        PlHomeo::identity(&like, opts.grid),
        PlHomeo::identity(&like, opts.grid),
        alpha,
    )?;
    let mut orbits: Option<ShadowOrbits<S>> = None;
    // converged cycles whose residual is still above 10·tol get a few more
    // passes; the best one is kept
    const REFINEMENTS: usize = 3;
    let mut refinements = 0;
    let mut best = None;
    let mut smallest_change: Option<S> = None;
    let mut stalled = 0;
    let floor = opts.tol.clone() * &opts.tol.lift(NOISE_SLACK);
    let target = opts.tol.clone() * &opts.tol.lift(10.0);
    let mut endgame_below = opts.tol.lift(ENDGAME_START);

    for outer in 0..opts.max_outer {
        let first = thurston(
            &family,
            t,
            &Closure::FixedBoundary,
            &opts.thurston,
            orbits.as_ref(),
        )
        .map_err(|e| search_failure("thurston", outer, e))?;
        let c_next =
            newton_step_c(&first.map, t).map_err(|e| search_failure("newton", outer, e))?;
        check_margin(&c_next).map_err(|e| search_failure("newton", outer, e))?;
        let moved = first.map.with_c_unchecked(c_next);
        let second = thurston(
            &moved,
            t,
            &Closure::FixedBoundary,
            &opts.thurston,
            Some(&first.orbits),
        )
        .map_err(|e| search_failure("thurston", outer, e))?;
        let renormalized = truncated_renormalize(&second.map, t, opts.grid)
            .map_err(|e| search_failure("renormalize", outer, e))?;
        let next = LorenzRep::new(
            second.map.c().clone(),
            second.map.v0().clone(),
            second.map.v1().clone(),
            renormalized.phi0().clone(),
            renormalized.phi1().clone(),
            second.map.alpha().clone(),
        )
        .map_err(|e| search_failure("renormalize", outer, e))?;
        let change = sup_distance(&first.map, &next);
        orbits = Some(second.orbits);
        family = next;
        match &smallest_change {
            Some(s) if change.clone() * &change.lift(2.0) > *s => stalled += 1,
            _ => {
                smallest_change = Some(change.clone());
                stalled = 0;
            }
        }
        if change < endgame_below {
            endgame_below = change.clone() * &change.lift(ENDGAME_RETRY);
            if let Some((map, residual)) = endgame(&family, t, opts.grid, &target) {
                return Ok(FixedPointResult {
                    map,
                    renorm_type: t.clone(),
                    residual,
                    iterations: outer + 1,
                    grid: opts.grid,
                });
            }
        }
        let at_floor =
            stalled >= STALL_CYCLES && smallest_change.as_ref().is_some_and(|s| *s < floor);
        if change < opts.tol || at_floor {
            let residual = fixed_point_residual(&family, t, opts.grid)
                .map_err(|e| search_failure("residual", outer, e))?;
            let done = residual < opts.tol.clone() * &opts.tol.lift(10.0)
                || refinements == REFINEMENTS
                || at_floor;
            let candidate = FixedPointResult {
                map: family.clone(),
                renorm_type: t.clone(),
                residual,
                iterations: outer + 1,
                grid: opts.grid,
            };
            let better = best
                .as_ref()
                .is_none_or(|b: &FixedPointResult<S>| candidate.residual < b.residual);
            if better {
                best = Some(candidate);
            }
            if done {
                return Ok(best.expect("a candidate was recorded"));
            }
            refinements += 1;
        }
    }
    Err(search_failure(
        "outer",
        opts.max_outer,
        Error::NonConvergence {
            iterations: opts.max_outer,
            last_step: f64::NAN,
        },
    ))
}

/// Cycle change below which [`endgame`] is tried, and the factor the
/// change must shrink by before another try.
const ENDGAME_START: f64 = 1e-10;
const ENDGAME_RETRY: f64 = 1e-6;
const ENDGAME_STEPS: usize = 40;

/// Chord Newton on `R(x) − x` over all truncated coordinates. The
/// Jacobian is taken once at `f` in double precision (falling back to the
/// working precision if that evaluation fails) and factorized in double
/// precision; the residual is evaluated at working precision, so each step
/// gains about as many digits as the Jacobian is accurate. Returns the map
/// once its residual is below `target`.
fn endgame<S: Real>(
    f: &LorenzRep<S>,
    t: &RenormType,
    grid: usize,
    target: &S,
) -> Option<(LorenzRep<S>, S)> {
    let alpha = f.alpha().clone();
    let mut x = coordinates(f);
    let n = x.len();
    let coarse: Vec<f64> = x.iter().map(|v| v.to_f64()).collect();
    let coarse_alpha = Dual::constant(alpha.to_f64());
    let jac: Matrix<f64> = match jacobian(
        |d| truncated_renormalize_coords(d, t, grid, coarse_alpha),
        &coarse,
    ) {
        Ok(j) => j,
        Err(_) => {
            let dual_alpha = Dual::constant(alpha.clone());
            let j = jacobian(|d| truncated_renormalize_coords(d, t, grid, dual_alpha), &x).ok()?;
            Matrix::from_fn(n, n, |r, c| j[(r, c)].to_f64())
        }
    };
    if !(0..n).all(|r| (0..n).all(|c| jac[(r, c)].is_finite())) {
        return None;
    }
    let shifted = DMatrix::from_fn(n, n, |i, j| jac[(i, j)] - if i == j { 1.0 } else { 0.0 });
    let lu = shifted.lu();
    let mut previous: Option<S> = None;
    for _ in 0..ENDGAME_STEPS {
        let image = truncated_renormalize_coords(&x, t, grid, alpha.clone()).ok()?;
        let defect: Vec<S> = image.into_iter().zip(&x).map(|(r, xi)| r - xi).collect();
        let size = defect
            .iter()
            .fold(alpha.zero_like(), |a, d| a.max_of(d.clone().abs()));
        if size < *target {
            let map = from_coordinates(&x, grid, alpha).ok()?;
            let map = LorenzRep::new(
                map.c().clone(),
                map.v0().clone(),
                map.v1().clone(),
                map.phi0().clone(),
                map.phi1().clone(),
                map.alpha().clone(),
            )
            .ok()?;
            let residual = fixed_point_residual(&map, t, grid).ok()?;
            return (residual < *target).then_some((map, residual));
        }
        if previous.as_ref().is_some_and(|p| size >= *p) {
            return None;
        }
        // (J − I)·dx = R(x) − x, then x ← x − dx
        let rhs = DVector::from_iterator(n, defect.iter().map(|d| d.to_f64()));
        let dx = lu.solve(&rhs)?;
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi = xi.clone() - &alpha.lift(*d);
        }
        previous = Some(size);
    }
    None
}

/// Derivative of the truncated operator at `fp.map` in the coordinates of
/// [`coordinates`]: `(c, v0, v1, interior φ0 values, interior φ1 values)`.
pub fn jacobian_at<S: Real>(fp: &FixedPointResult<S>) -> Result<Matrix<S>> {
    let alpha = Dual::constant(fp.map.alpha().clone());
    jacobian(
        |x: &[Dual<S>]| truncated_renormalize_coords(x, &fp.renorm_type, fp.grid, alpha),
        &coordinates(&fp.map),
    )
}

/// Spectrum of the derivative of the truncated operator at a fixed point.
pub fn eigen_at<S: RealFunctions>(fp: &FixedPointResult<S>) -> Result<SpectralReport<S>> {
    eigenvalues(&jacobian_at(fp)?)
}

/// The eigenvalue belonging to movement of the critical point.
///
/// In the three-dimensional truncation it is the smallest in magnitude.
/// With φ-directions present those add many small eigenvalues, so the
/// eigenvalue nearest to the smallest one of the `(c, v)` block is taken.
pub fn critical_eigenvalue<S: RealFunctions>(
    jac: &Matrix<S>,
    report: &SpectralReport<S>,
) -> Result<Complex<S>> {
    if jac.rows() <= 3 {
        return Ok(report.lambda_c.clone());
    }
    let anchor = eigenvalues(&jac.leading_block(3))?.lambda_c;
    let distance = |z: &Complex<S>| {
        let dr = z.re.clone() - &anchor.re;
        let di = z.im.clone() - &anchor.im;
        dr.clone() * &dr + &(di.clone() * &di)
    };
    Ok(report
        .eigenvalues
        .iter()
        .min_by(|a, b| {
            distance(a)
                .partial_cmp(&distance(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .cloned()
        .expect("non-empty spectrum"))
}

/// `λ_c` at a fixed point together with the remaining eigenvalues,
/// largest magnitude first.
pub fn critical_spectrum<S: RealFunctions>(
    fp: &FixedPointResult<S>,
) -> Result<(Complex<S>, Vec<Complex<S>>)> {
    let jac = jacobian_at(fp)?;
    let report = eigenvalues(&jac)?;
    let lambda_c = critical_eigenvalue(&jac, &report)?;
    let mut rest = report.eigenvalues;
    if let Some(i) = rest.iter().position(|z| *z == lambda_c) {
        rest.remove(i);
    }
    Ok((lambda_c, rest))
}

/// Initial critical points tried by [`fixed_point_from_ladder`]: 0.5, 0.3,
/// 0.7, 0.1, 0.9, then 16 uniform samples.
pub fn c_guess_ladder() -> Vec<f64> {
    let mut out = vec![0.5, 0.3, 0.7, 0.1, 0.9];
    out.extend((1..=16).map(|j| j as f64 / 17.0));
    out
}

/// Initial critical points for the period-2 search: 24 uniform samples of
/// `(0, 1)` away from the fixed point's critical point.
pub fn period2_guesses(c_fixed: f64) -> Vec<f64> {
    (1..=24)
        .map(|j| j as f64 / 25.0)
        .filter(|c| (c - c_fixed).abs() > 1e-2)
        .collect()
}

/// Tries [`find_fixed_point`] from each guess in turn; also returns one
/// diagnostic line per failed attempt.
pub fn fixed_point_from_ladder<S: Real>(
    t: &RenormType,
    alpha: &S,
    guesses: &[f64],
    opts: &FixedPointOptions<S>,
) -> Result<(FixedPointResult<S>, Vec<String>)> {
    let mut diagnostics = Vec::new();
    let mut last = None;
    for &c in guesses {
        match find_fixed_point(t, alpha.clone(), alpha.lift(c), opts) {
            Ok(fp) => return Ok((fp, diagnostics)),
            Err(e) => {
                diagnostics.push(format!("type {t}, c = {c}: {e}"));
                last = Some(e);
            }
        }
    }
    Err(last.unwrap_or_else(|| Error::InvalidArgument("no initial critical points given".into())))
}

#[derive(Clone, Debug)]
pub enum Period2Outcome<S> {
    /// Every attempt degenerated (or failed).
    Diverged,
    /// Some attempt came back to the fixed point.
    Coincides,
    /// `flat` has the smaller critical point. One of the two is a fixed
    /// point of the doubled type, the other its truncated renormalization;
    /// on fine grids each is close to the renormalization of the other.
    Period2 {
        flat: FixedPointResult<S>,
        sharp: FixedPointResult<S>,
    },
}

#[derive(Clone, Debug)]
pub struct Period2Search<S> {
    pub outcome: Period2Outcome<S>,
    /// One line per attempt.
    pub attempts: Vec<String>,
}

/// Critical points this close count as the same fixed point.
pub const COINCIDENCE_RADIUS: f64 = 1e-4;

/// Looks for a period-2 orbit of the truncated operator of type `t` as a
/// fixed point of the doubled type, trying each guess until one converges
/// away from `c_fixed` and from the doubled-type fixed point reached
/// from `c_fixed`.
pub fn find_period2<S: Real>(
    t: &RenormType,
    alpha: &S,
    c_fixed: &S,
    guesses: &[f64],
    opts: &FixedPointOptions<S>,
) -> Result<Period2Search<S>> {
    let doubled = t.doubled();
    let mut attempts = Vec::new();
    let mut coincided = false;
    // the truncated doubled operator moves the fixed point itself by the
    // truncation error, so convergence to its own copy counts as coinciding
    let copy = match find_fixed_point(&doubled, alpha.clone(), c_fixed.clone(), opts) {
        Ok(fp) => {
            attempts.push(format!(
                "doubled type from the fixed point: c = {}",
                fp.map.c().to_f64()
            ));
            Some(fp.map.c().clone())
        }
        Err(e) => {
            attempts.push(format!("doubled type from the fixed point: {e}"));
            None
        }
    };
    let near = |c: &S, to: &S| (c.clone() - to).abs() < alpha.lift(COINCIDENCE_RADIUS);
    for &c in guesses {
        let found = match find_fixed_point(&doubled, alpha.clone(), alpha.lift(c), opts) {
            Ok(fp) => fp,
            Err(e) => {
                let kind = if e.is_c_degenerate() {
                    "diverged"
                } else {
                    "failed"
                };
                attempts.push(format!("c = {c}: {kind}: {e}"));
                continue;
            }
        };
        if near(found.map.c(), c_fixed) || copy.as_ref().is_some_and(|k| near(found.map.c(), k)) {
            attempts.push(format!("c = {c}: coincides with the fixed point"));
            coincided = true;
            continue;
        }
        let partner = match partner_of(&found, t, opts) {
            Ok(p) => p,
            Err(e) => {
                attempts.push(format!(
                    "c = {c}: converged but its renormalization failed: {e}"
                ));
                continue;
            }
        };
        attempts.push(format!(
            "c = {c}: period 2 with c = {}",
            found.map.c().to_f64()
        ));
        let (flat, sharp) = if partner.map.c() < found.map.c() {
            (partner, found)
        } else {
            (found, partner)
        };
        return Ok(Period2Search {
            outcome: Period2Outcome::Period2 { flat, sharp },
            attempts,
        });
    }
    let outcome = if coincided {
        Period2Outcome::Coincides
    } else {
        Period2Outcome::Diverged
    };
    Ok(Period2Search { outcome, attempts })
}

/// The other point of a period-2 orbit: one truncated renormalization of
/// type `t`, reported as a fixed point of the doubled type. Its residual
/// is infinite when it is not renormalizable of the doubled type, which
/// happens on coarse grids where the truncation between the two halves
/// breaks exact period 2.
fn partner_of<S: Real>(
    found: &FixedPointResult<S>,
    t: &RenormType,
    opts: &FixedPointOptions<S>,
) -> Result<FixedPointResult<S>> {
    let map = truncated_renormalize(&found.map, t, opts.grid)?;
    let residual = fixed_point_residual(&map, &found.renorm_type, opts.grid)
        .unwrap_or_else(|_| map.c().lift(f64::INFINITY));
    Ok(FixedPointResult {
        map,
        renorm_type: found.renorm_type.clone(),
        residual,
        iterations: found.iterations,
        grid: opts.grid,
    })
}

/// The three regimes of the renormalization conjecture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// Hyperbolic fixed point with the critical direction contracting.
    A,
    /// Unstable critical direction.
    B,
    /// A fixed point and a period-2 orbit coexist.
    C,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let letter = match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
        };
        f.write_str(letter)
    }
}

#[derive(Clone, Debug)]
pub struct Classification<S> {
    pub case: Case,
    pub lambda_c: Complex<S>,
    pub fixed_point: FixedPointResult<S>,
    pub spectrum: SpectralReport<S>,
    /// `(flat, sharp)` in case C.
    pub period2: Option<(FixedPointResult<S>, FixedPointResult<S>)>,
    pub diagnostics: Vec<String>,
    pub recheck: Option<Recheck>,
}

/// Outcome of classifying again on a finer truncation grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recheck {
    pub grid: usize,
    /// `None` if the finer classification failed.
    pub case: Option<Case>,
}

impl Recheck {
    pub fn changed(&self, original: Case) -> bool {
        self.case != Some(original)
    }
}

/// Decides the case of `t`:
///
/// 1. locate a fixed point (guesses from [`c_guess_ladder`]) and its
///    critical eigenvalue `λ_c`;
/// 2. `|λ_c| > 1` gives B, `λ_c ∈ (0, 1)` gives A;
/// 3. for `λ_c ∈ (−1, 0]` search for a period-2 orbit: found gives C,
///    otherwise A.
///
/// A complex `λ_c` inside the unit disc is decided by the sign of its real
/// part.
pub fn classify<S: RealFunctions>(
    t: &RenormType,
    alpha: &S,
    opts: &FixedPointOptions<S>,
) -> Result<Classification<S>> {
    let (fixed_point, mut diagnostics) =
        fixed_point_from_ladder(t, alpha, &c_guess_ladder(), opts)?;
    let jac = jacobian_at(&fixed_point)?;
    let spectrum = eigenvalues(&jac)?;
    let lambda_c = critical_eigenvalue(&jac, &spectrum)?;
    let modulus_sqr = lambda_c.re.clone() * &lambda_c.re + &(lambda_c.im.clone() * &lambda_c.im);
    let one = alpha.one_like();
    let zero = alpha.zero_like();
    diagnostics.push(format!(
        "fixed point c = {} after {} cycles, lambda_c = {}{:+}i",
        fixed_point.map.c().to_f64(),
        fixed_point.iterations,
        lambda_c.re.to_f64(),
        lambda_c.im.to_f64()
    ));

    let (case, period2) = if modulus_sqr > one {
        (Case::B, None)
    } else if lambda_c.re > zero {
        (Case::A, None)
    } else {
        let guesses = period2_guesses(fixed_point.map.c().to_f64());
        let search = find_period2(t, alpha, fixed_point.map.c(), &guesses, opts)?;
        diagnostics.extend(
            search
                .attempts
                .into_iter()
                .map(|a| format!("period-2 search, {a}")),
        );
        match search.outcome {
            Period2Outcome::Period2 { flat, sharp } => (Case::C, Some((flat, sharp))),
            Period2Outcome::Diverged | Period2Outcome::Coincides => (Case::A, None),
        }
    };
    Ok(Classification {
        case,
        lambda_c,
        fixed_point,
        spectrum,
        period2,
        diagnostics,
        recheck: None,
    })
}

/// [`classify`], then classify again with `recheck_grid` truncation nodes
/// and note in the diagnostics whether the case changes.
pub fn classify_rechecked<S: RealFunctions>(
    t: &RenormType,
    alpha: &S,
    opts: &FixedPointOptions<S>,
    recheck_grid: usize,
) -> Result<Classification<S>> {
    let mut out = classify(t, alpha, opts)?;
    let finer = FixedPointOptions {
        grid: recheck_grid,
        ..opts.clone()
    };
    let case = match classify(t, alpha, &finer) {
        Ok(r) => Some(r.case),
        Err(e) => {
            out.diagnostics
                .push(format!("recheck at grid {recheck_grid} failed: {e}"));
            None
        }
    };
    let recheck = Recheck {
        grid: recheck_grid,
        case,
    };
    if let Some(c) = case {
        if recheck.changed(out.case) {
            out.diagnostics.push(format!(
                "classification changes from {} to {c} at grid {recheck_grid}",
                out.case
            ));
        } else {
            out.diagnostics
                .push(format!("recheck at grid {recheck_grid} agrees"));
        }
    }
    out.recheck = Some(recheck);
    Ok(out)
}
