//! Small dense matrices over any [`Scalar`].
//!
//! Sizes here never exceed 4x4 (plus the occasional 3x3 affine system), so
//! the routines favour clarity: Gaussian elimination with magnitude pivoting,
//! and Faddeev-LeVerrier for characteristic polynomials, which stays exact over
//! the rationals.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::Shape { expected: format!("{c} columns"), got: format!("{} columns", bad.len()) });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
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

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone())
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Index of the row (at or below `start`) with the largest pivot in `col`.
    fn pivot_row(&self, start: usize, col: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in start..self.rows {
            let m = self[(r, col)].magnitude();
            let nonzero = if F::EXACT { !self[(r, col)].is_zero() } else { m > 0.0 };
            if nonzero && best.is_none_or(|(_, bm)| m > bm) {
                best = Some((r, m));
            }
        }
        best.map(|(r, _)| r)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = m.pivot_row(col, col) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                let factor = m[(r, col)].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m[(col, c)].clone() * factor.clone();
                    m[(r, c)] = m[(r, c)].clone() - v;
                }
            }
        }
        det
    }

    /// Rank, with entries of magnitude `<= tol * max_abs` treated as zero in float mode.
    pub fn rank(&self, tol: f64) -> usize {
        let mut m = self.clone();
        let threshold = tol * self.max_abs().max(f64::MIN_POSITIVE);
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = m.pivot_row(rank, col) else { continue };
            if !F::EXACT && m[(p, col)].magnitude() <= threshold {
                continue;
            }
            m.swap_rows(p, rank);
            let pivot = m[(rank, col)].clone();
            for r in rank + 1..self.rows {
                let factor = m[(r, col)].clone() / pivot.clone();
                for c in col..self.cols {
                    let v = m[(rank, c)].clone() * factor.clone();
                    m[(r, c)] = m[(r, c)].clone() - v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `self * x = b` for square `self`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, LinalgError> {
        assert!(self.is_square());
        let n = self.rows;
        if b.len() != n {
            return Err(LinalgError::Shape { expected: format!("{n}"), got: format!("{}", b.len()) });
        }
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let p = m.pivot_row(col, col).ok_or(LinalgError::Singular)?;
            m.swap_rows(p, col);
            rhs.swap(p, col);
            let pivot = m[(col, col)].clone();
            for r in col + 1..n {
                let factor = m[(r, col)].clone() / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m[(col, c)].clone() * factor.clone();
                    m[(r, c)] = m[(r, c)].clone() - v;
                }
                rhs[r] = rhs[r].clone() - rhs[col].clone() * factor;
            }
        }
        let mut x = vec![F::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                acc = acc - m[(i, j)].clone() * x[j].clone();
            }
            x[i] = acc / m[(i, i)].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![F::zero(); n];
            e[j] = F::one();
            cols.push(self.solve(&e)?);
        }
        Ok(Self::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    /// Coefficients `[c_0, ..., c_{n-1}, 1]` of `det(t*I - self)`, lowest degree first.
    pub fn charpoly(&self) -> Vec<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale(&coeffs[n - k + 1]));
            let t = self.mul(&m).trace();
            coeffs[n - k] = -(t / F::from_i64(k as i64));
        }
        coeffs
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a complex or real vector.
pub fn norm<F: Scalar>(v: &[F]) -> f64 {
    v.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational, Rational};

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn exact_determinant_and_inverse() {
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).det(), int(0));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn charpoly_matches_cofactor_expansion() {
        // det(tI - M) for M = [[1,2],[3,4]] is t^2 - 5t - 2
        let m = q(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.charpoly(), vec![int(-2), int(-5), int(1)]);
        let m3 = q(&[&[2, 0, 0], &[0, 3, 0], &[1, 0, 5]]);
        // (t-2)(t-3)(t-5) = t^3 - 10t^2 + 31t - 30
        assert_eq!(m3.charpoly(), vec![int(-30), int(31), int(-10), int(1)]);
    }

    #[test]
    fn rank_exact_and_float() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(0.0), 2);
        let f = m.map(|x| crate::scalar::rational_to_f64(x));
        assert_eq!(f.rank(1e-12), 2);
        let half = Matrix::from_rows(vec![vec![rational(1, 2)]]).unwrap();
        assert_eq!(half.rank(0.0), 1);
    }

    #[test]
    fn solve_float_system() {
        let m = Matrix::from_rows(vec![vec![4.0, 1.0], vec![2.0, 3.0]]).unwrap();
        let x = m.solve(&[1.0, 2.0]).unwrap();
        assert!((x[0] - 0.1).abs() < 1e-15 && (x[1] - 0.6).abs() < 1e-15);
    }
}
