//! Small dense matrices and forward-mode Jacobians.

use std::ops::{Index, IndexMut};

use super::dual::Dual;
use super::real::Real;

/// Row-major dense matrix over any [`Real`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Real> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        Matrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(entry(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity_like(n: usize, like: &S) -> Self {
        Self::from_fn(n, n, |i, j| like.lift(if i == j { 1.0 } else { 0.0 }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Option<S> {
        self.data.iter().map(Real::abs).reduce(|a, b| a.max_of(b))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Real::to_f64).collect())
            .collect()
    }

    /// Solves `self · x = rhs` by Gaussian elimination with partial
    /// pivoting. Returns `None` when a pivot falls below `floor` times the
    /// largest entry.
    pub fn solve(&self, rhs: &[S], floor: &S) -> Option<Vec<S>> {
        let n = self.rows;
        if !self.is_square() || rhs.len() != n {
            return None;
        }
        let scale = self.max_abs()?;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .abs()
                        .partial_cmp(&a[(j, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("non-empty range");
            if !(a[(pivot, col)].abs() > scale.clone() * floor) {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(col, j)].clone();
                    a[(col, j)] = a[(pivot, j)].clone();
                    a[(pivot, j)] = tmp;
                }
                b.swap(col, pivot);
            }
            for i in col + 1..n {
                let factor = a[(i, col)].clone() / &a[(col, col)];
                for j in col..n {
                    let delta = factor.clone() * &a[(col, j)];
                    a[(i, j)] = a[(i, j)].clone() - &delta;
                }
                let delta = factor * &b[col];
                b[i] = b[i].clone() - &delta;
            }
        }
        let mut x = vec![scale.zero_like(); n];
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for j in i + 1..n {
                acc = acc - &(a[(i, j)].clone() * &x[j]);
            }
            x[i] = acc / &a[(i, i)];
        }
        Some(x)
    }

    /// Copies the leading `k×k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self::from_fn(k, k, |i, j| self[(i, j)].clone())
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Jacobian of `map` at `point`, all directions seeded at once.
///
/// Column `j` is the exact directional derivative along `e_j`, computed
/// with [`Dual`] arithmetic at the precision of the point.
pub fn jacobian<S, E, F>(map: F, point: &[S]) -> Result<Matrix<S>, E>
where
    S: Real,
    F: FnOnce(&[Dual<S>]) -> Result<Vec<Dual<S>>, E>,
{
    let n = point.len();
    let seeded: Vec<Dual<S>> = point
        .iter()
        .enumerate()
        .map(|(j, x)| Dual::variable(x.clone(), j, n))
        .collect();
    let out = map(&seeded)?;
    Ok(Matrix::from_fn(out.len(), n, |i, j| out[i].derivative(j)))
}
