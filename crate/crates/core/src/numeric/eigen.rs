//! Eigenvalues of small real matrices.
//!
//! The 3×3 case, on which the classification hinges, is solved from the
//! characteristic cubic at the full working precision and then polished
//! with Newton steps. Larger matrices go through a Hessenberg/shifted-QR
//! Schur decomposition in `f64`.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex;

use super::matrix::Matrix;
use super::real::{Real, RealFunctions};
use crate::error::{Error, Result};

/// Iteration cap for the QR path.
pub const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// All eigenvalues of a matrix, largest magnitude first.
#[derive(Clone, Debug)]
pub struct SpectralReport<S> {
    pub eigenvalues: Vec<Complex<S>>,
    /// Smallest-magnitude eigenvalue (the last entry).
    pub lambda_c: Complex<S>,
    pub matrix_dim: usize,
}

impl<S: Real> SpectralReport<S> {
    fn from_unsorted(mut eigenvalues: Vec<Complex<S>>) -> Self {
        eigenvalues.sort_by(|a, b| {
            let ma = norm_sqr(a);
            let mb = norm_sqr(b);
            mb.partial_cmp(&ma)
                .unwrap_or(Ordering::Equal)
                .then_with(|| b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal))
                .then_with(|| b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
        });
        let lambda_c = eigenvalues
            .last()
            .cloned()
            .expect("at least one eigenvalue");
        SpectralReport {
            matrix_dim: eigenvalues.len(),
            eigenvalues,
            lambda_c,
        }
    }

    /// Number of eigenvalues strictly outside the unit circle.
    pub fn unstable_count(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|z| norm_sqr(z) > z.re.one_like())
            .count()
    }
}

pub(crate) fn norm_sqr<S: Real>(z: &Complex<S>) -> S {
    z.re.clone() * &z.re + &(z.im.clone() * &z.im)
}

/// Eigenvalues of a square matrix.
pub fn eigenvalues<S: RealFunctions>(m: &Matrix<S>) -> Result<SpectralReport<S>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues need a non-empty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    for i in 0..n {
        if !m.row(i).iter().all(Real::is_finite) {
            return Err(Error::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
    }
    let triangular = (0..n).all(|i| (0..i).all(|j| m[(i, j)] == m[(i, j)].zero_like()))
        || (0..n).all(|i| (i + 1..n).all(|j| m[(i, j)] == m[(i, j)].zero_like()));
    let values = match n {
        _ if triangular => (0..n)
            .map(|i| Complex::new(m[(i, i)].clone(), m[(i, i)].zero_like()))
            .collect(),
        1 => {
            let a = m[(0, 0)].clone();
            vec![Complex::new(a.clone(), a.zero_like())]
        }
        2 => {
            let tr = m[(0, 0)].clone() + &m[(1, 1)];
            let det = m[(0, 0)].clone() * &m[(1, 1)] - &(m[(0, 1)].clone() * &m[(1, 0)]);
            let (r1, r2) = quadratic_roots(-tr, det);
            vec![r1, r2]
        }
        3 => cubic_eigenvalues(m),
        _ => qr_eigenvalues(m)?,
    };
    Ok(SpectralReport::from_unsorted(values))
}

/// Roots of `λ² + bλ + c`.
fn quadratic_roots<S: Real>(b: S, c: S) -> (Complex<S>, Complex<S>) {
    let two = b.lift(2.0);
    let four = b.lift(4.0);
    let disc = b.clone() * &b - &(four * &c);
    let zero = b.zero_like();
    if disc >= zero {
        let root = disc.sqrt();
        // avoid cancellation: q = −(b + sign(b)·√disc)/2, roots q and c/q
        let q = if b >= zero {
            -(b.clone() + &root) / &two
        } else {
            (root - &b) / &two
        };
        if q == zero {
            return (
                Complex::new(zero.clone(), zero.clone()),
                Complex::new(zero.clone(), zero),
            );
        }
        let other = c / &q;
        (Complex::new(q, zero.clone()), Complex::new(other, zero))
    } else {
        let re = -b / &two;
        let im = (-disc).sqrt() / &two;
        (Complex::new(re.clone(), im.clone()), Complex::new(re, -im))
    }
}

/// Coefficients `(a, b, c)` of the monic characteristic polynomial
/// `λ³ + aλ² + bλ + c`.
fn characteristic_cubic<S: Real>(m: &Matrix<S>) -> (S, S, S) {
    let e = |i: usize, j: usize| m[(i, j)].clone();
    let trace = e(0, 0) + &e(1, 1) + &e(2, 2);
    let minors = e(0, 0) * &e(1, 1) - &(e(0, 1) * &e(1, 0)) + &(e(0, 0) * &e(2, 2))
        - &(e(0, 2) * &e(2, 0))
        + &(e(1, 1) * &e(2, 2))
        - &(e(1, 2) * &e(2, 1));
    let det = e(0, 0) * &(e(1, 1) * &e(2, 2) - &(e(1, 2) * &e(2, 1)))
        - &(e(0, 1) * &(e(1, 0) * &e(2, 2) - &(e(1, 2) * &e(2, 0))))
        + &(e(0, 2) * &(e(1, 0) * &e(2, 1) - &(e(1, 1) * &e(2, 0))));
    (-trace, minors, -det)
}

fn cubic_eval<S: Real>(a: &S, b: &S, c: &S, x: &S) -> (S, S) {
    let p = ((x.clone() + a) * x + b) * x + c;
    let dp = (x.clone() * &x.lift(3.0) + &(a.clone() * &x.lift(2.0))) * x + b;
    (p, dp)
}

/// Newton polish of a real root; steps are kept only while |p| decreases.
fn polish<S: Real>(a: &S, b: &S, c: &S, mut x: S) -> S {
    let (mut p, mut dp) = cubic_eval(a, b, c, &x);
    for _ in 0..8 {
        if dp == dp.zero_like() {
            break;
        }
        let candidate = x.clone() - &(p.clone() / &dp);
        let (pc, dpc) = cubic_eval(a, b, c, &candidate);
        if pc.abs() >= p.abs() {
            break;
        }
        x = candidate;
        p = pc;
        dp = dpc;
    }
    x
}

fn cubic_eigenvalues<S: RealFunctions>(m: &Matrix<S>) -> Vec<Complex<S>> {
    let (a, b, c) = characteristic_cubic(m);
    let like = a.clone();
    let zero = like.zero_like();
    let three = like.lift(3.0);
    // λ = t − a/3 gives t³ + pt + q
    let shift = a.clone() / &three;
    let p = b.clone() - &(a.clone() * &a / &three);
    let q = a.clone() * &a * &a * &like.lift(2.0 / 27.0) - &(a.clone() * &b / &three) + &c;
    let disc = -(p.clone() * &p * &p * &like.lift(4.0) + &(q.clone() * &q * &like.lift(27.0)));

    if p == zero && q == zero {
        let r = -shift;
        return vec![
            Complex::new(r.clone(), zero.clone()),
            Complex::new(r.clone(), zero.clone()),
            Complex::new(r, zero),
        ];
    }

    if disc >= zero && p < zero {
        // three real roots, trigonometric form
        let scale = (-(p.clone()) / &three).sqrt() * &like.lift(2.0);
        let mut arg =
            q.clone() * &three / &(p.clone() * &like.lift(2.0)) * &(-(three.clone()) / &p).sqrt();
        let one = like.one_like();
        if arg > one {
            arg = one.clone();
        } else if arg < -one.clone() {
            arg = -one;
        }
        let theta = arg.acos() / &three;
        let two_pi_3 = like.pi_like() * &like.lift(2.0) / &three;
        (0..3)
            .map(|k| {
                let angle = theta.clone() - &(two_pi_3.clone() * &like.lift(k as f64));
                let root = scale.clone() * &angle.cos() - &shift;
                Complex::new(polish(&a, &b, &c, root), zero.clone())
            })
            .collect()
    } else {
        // one real root by Cardano, then deflate to a quadratic
        let half_q = q.clone() / &like.lift(2.0);
        let inner = half_q.clone() * &half_q + &(p.clone() * &p * &p / &like.lift(27.0));
        let root_inner = if inner > zero {
            inner.sqrt()
        } else {
            zero.clone()
        };
        let u = (-(half_q.clone()) + &root_inner).cbrt();
        let v = (-half_q - &root_inner).cbrt();
        let real = polish(&a, &b, &c, u + &v - &shift);
        // λ³+aλ²+bλ+c = (λ − r)(λ² + (a + r)λ + (b + r(a + r)))
        let lin = a.clone() + &real;
        let cst = b.clone() + &(real.clone() * &lin);
        let (z1, z2) = quadratic_roots(lin, cst);
        vec![Complex::new(real, zero), z1, z2]
    }
}

fn qr_eigenvalues<S: Real>(m: &Matrix<S>) -> Result<Vec<Complex<S>>> {
    let n = m.rows();
    let like = m[(0, 0)].clone();
    let dense = DMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64());
    let schur = nalgebra::linalg::Schur::try_new(dense, f64::EPSILON, EIGEN_MAX_ITERATIONS)
        .ok_or_else(|| {
            Error::SolverFailure(format!(
                "Schur iteration did not converge for {n}x{n} matrix"
            ))
        })?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex::new(like.lift(z.re), like.lift(z.im)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Mp;

    fn mp_matrix(rows: &[[f64; 3]]) -> Matrix<Mp> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Mp::new(256, x)).collect())
                .collect(),
        )
    }

    fn reals(report: &SpectralReport<Mp>) -> Vec<f64> {
        report.eigenvalues.iter().map(|z| z.re.to_f64()).collect()
    }

    #[test]
    fn identity() {
        let r = eigenvalues(&mp_matrix(&[[1., 0., 0.], [0., 1., 0.], [0., 0., 1.]])).unwrap();
        assert_eq!(reals(&r), vec![1.0, 1.0, 1.0]);
        assert_eq!(r.lambda_c.re, 1.0);
    }

    #[test]
    fn diagonal_sorted_by_magnitude() {
        let r = eigenvalues(&mp_matrix(&[[2., 0., 0.], [0., -0.5, 0.], [0., 0., 0.1]])).unwrap();
        let v = reals(&r);
        assert!(
            (v[0] - 2.0).abs() < 1e-60 && (v[1] + 0.5).abs() < 1e-60 && (v[2] - 0.1).abs() < 1e-60
        );
        assert!((r.lambda_c.re.to_f64() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn companion_matrix() {
        // t³ − 6t² + 11t − 6 = (t−1)(t−2)(t−3)
        let r = eigenvalues(&mp_matrix(&[[0., 0., 6.], [1., 0., -11.], [0., 1., 6.]])).unwrap();
        let tol = Mp::new(256, 2f64.powi(-240));
        for (z, want) in r.eigenvalues.iter().zip([3.0, 2.0, 1.0]) {
            assert!((z.re.clone() - &Mp::new(256, want)).abs() < tol);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn rotation_gives_conjugate_pair() {
        let r = eigenvalues(&mp_matrix(&[[0., -1., 0.], [1., 0., 0.], [0., 0., 0.5]])).unwrap();
        assert!((r.eigenvalues[0].im.to_f64() - 1.0).abs() < 1e-60);
        assert!((r.eigenvalues[1].im.to_f64() + 1.0).abs() < 1e-60);
        assert!((r.lambda_c.re.to_f64() - 0.5).abs() < 1e-60);
    }

    #[test]
    fn larger_matrices_use_schur() {
        let m = Matrix::from_fn(5, 5, |i, j| {
            if i == j {
                (i + 1) as f64
            } else if j == i + 1 {
                0.3
            } else {
                0.0
            }
        });
        let r = eigenvalues(&m).unwrap();
        let v: Vec<f64> = r.eigenvalues.iter().map(|z| z.re).collect();
        for (got, want) in v.iter().zip([5.0, 4.0, 3.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two() {
        let m = Matrix::from_rows(vec![vec![0.0, 1.0], vec![-2.0, -3.0]]);
        let r = eigenvalues(&m).unwrap();
        assert!((r.eigenvalues[0].re + 2.0).abs() < 1e-15);
        assert!((r.lambda_c.re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_square() {
        let m = Matrix::from_rows(vec![vec![1.0, 2.0]]);
        assert!(eigenvalues(&m).is_err());
    }
}
