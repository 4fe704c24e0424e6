//! Exact rank computation, generic over the coefficient scalar.
//!
//! Two independent routes are provided: fraction-free (Bareiss) elimination,
//! which only needs exact division in an integral domain, and ordinary
//! Gauss-Jordan elimination over a field. The Betti oracle runs the first
//! over machine integers and the test suite checks it against the second
//! over arbitrary precision rationals.

use std::fmt;

use num_traits::{CheckedMul, CheckedSub, Num};

/// Coefficients accepted by fraction-free elimination.
pub trait DomainScalar: Num + Clone + PartialEq + fmt::Debug + CheckedMul + CheckedSub {}

impl<T> DomainScalar for T where T: Num + Clone + PartialEq + fmt::Debug + CheckedMul + CheckedSub {}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Num + Clone> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-valued matrix converted into the scalar type.
    pub fn from_signs(rows: usize, cols: usize, entries: &[(usize, usize, i8)]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for &(r, c, s) in entries {
            let one = T::one();
            m.data[r * cols + c] = match s {
                1 => one,
                -1 => T::zero() - one,
                _ => panic!("boundary entries are +-1"),
            };
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * rhs.get(k, j).clone();
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn pivot_row(&self, from: usize, col: usize) -> Option<usize> {
        (from..self.rows).find(|&r| !self.get(r, col).is_zero())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

/// Rank by fraction-free elimination. `None` when an intermediate value
/// overflows the scalar type.
pub fn rank_fraction_free<T: DomainScalar>(matrix: &Matrix<T>) -> Option<usize> {
    let mut a = matrix.clone();
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(p) = a.pivot_row(rank, col) else {
            continue;
        };
        a.swap_rows(p, rank);
        let pivot = a.get(rank, col).clone();
        for r in rank + 1..a.rows {
            let lead = a.get(r, col).clone();
            for c in col + 1..a.cols {
                let top = pivot.checked_mul(a.get(r, c))?;
                let cross = lead.checked_mul(a.get(rank, c))?;
                let value = top.checked_sub(&cross)?;
                // exact: every entry is a minor of the original matrix
                a.data[r * a.cols + c] = value / prev.clone();
            }
            a.data[r * a.cols + col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

/// Rank by Gauss-Jordan elimination. `F` must be a field.
pub fn rank_gauss<F: Num + Clone>(matrix: &Matrix<F>) -> usize {
    let mut a = matrix.clone();
    let mut rank = 0;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(p) = a.pivot_row(rank, col) else {
            continue;
        };
        a.swap_rows(p, rank);
        let pivot = a.get(rank, col).clone();
        for x in a.row_mut(rank) {
            *x = x.clone() / pivot.clone();
        }
        let pivot_row: Vec<F> = a.row_mut(rank).to_vec();
        for r in 0..a.rows {
            if r == rank {
                continue;
            }
            let factor = a.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in a.row_mut(r).iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        rank += 1;
    }
    rank
}
