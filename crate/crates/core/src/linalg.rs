//! Dense exact-rational matrices and the elimination routines everything
//! else is built on.
//!
//! Elimination skips zero entries, so the sparse bidiagonal matrices that
//! `V` produces stay cheap even though storage is dense.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::ShapeMismatch(format!(
                    "column {j} has length {} instead of {rows}",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Q]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
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

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![Q::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() && !x.is_zero() {
                    *o += a * x;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Q, &Q) -> Q) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn pow(&self, k: u32) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Rows `row_idx` and columns `col_idx`, in the given order.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(row_idx.len(), col_idx.len());
        for (a, &i) in row_idx.iter().enumerate() {
            for (b, &j) in col_idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack with different row counts".into()));
        }
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] *= &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let delta = &factor * &m[(r, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column, with the
    /// free coordinate set to 1 and the other free coordinates to 0.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -matrix[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = b` with all free variables zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        if b.len() != self.rows {
            return None;
        }
        let bcol = Matrix::from_columns(self.rows, &[b.to_vec()]).ok()?;
        let aug = self.hstack(&bcol).ok()?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Result<Q> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Q::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] / &pivot;
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let delta = &factor * &m[(c, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let Rref { matrix, pivots } = self.hstack(&Matrix::identity(n))?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Invalid("matrix is singular".into()));
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(matrix.select(&rows, &cols))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Smallest `k >= 1` with `self^k = 0`, searching up to `bound`.
    pub fn nilpotency_index(&self, bound: usize) -> Result<Option<usize>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("nilpotency of a non-square matrix".into()));
        }
        let mut acc = self.clone();
        for k in 1..=bound.max(1) {
            if acc.is_zero() {
                return Ok(Some(k));
            }
            acc = acc.mul(self)?;
        }
        Ok(None)
    }

    /// Index of the first column where `self` and `other` differ.
    pub fn first_differing_column(&self, other: &Matrix) -> Option<usize> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some(0);
        }
        (0..self.cols).find(|&j| (0..self.rows).any(|i| self[(i, j)] != other[(i, j)]))
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of the span of a list of vectors of equal length `dim`.
pub fn span_rank(dim: usize, vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(dim, vectors).map(|m| m.rank()).unwrap_or(0)
}

/// Coordinates of `v` in the basis given by `columns`, if `v` lies in their span.
pub fn coordinates_in(dim: usize, columns: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    if columns.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = Matrix::from_columns(dim, columns).ok()?;
    m.solve(v)
}

/// Standard basis vectors completing the span of `vectors`: the non-pivot
/// coordinates of the reduced row echelon form of the stacked vectors.
pub fn complement_coordinates(dim: usize, vectors: &[Vec<Q>]) -> Vec<usize> {
    if vectors.is_empty() {
        return (0..dim).collect();
    }
    let rows: Vec<Vec<Q>> = vectors.to_vec();
    let m = Matrix::from_rows(rows).expect("equal lengths");
    let pivots = m.rref().pivots;
    (0..dim).filter(|c| !pivots.contains(c)).collect()
}

pub fn vec_is_zero(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

pub fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}
