//! Small dense linear algebra: a row-major matrix and a Cholesky solver.

use std::ops::{Index, IndexMut};

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch { left: r.len(), right: cols });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { left: self.cols, right: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0.0 {
                    for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `T' diag(w) T` for a row-major `T`.
pub fn weighted_gram(t: &Matrix, w: &[f64]) -> Result<Matrix> {
    if w.len() != t.rows {
        return Err(Error::LengthMismatch { left: w.len(), right: t.rows });
    }
    let (r, c) = (t.rows, t.cols);
    let mut wt = t.data.clone();
    for (row, wi) in wt.chunks_mut(c.max(1)).zip(w) {
        for v in row {
            *v *= wi;
        }
    }
    let mut out = Matrix::zeros(c, c);
    if r == 0 || c == 0 {
        return Ok(out);
    }
    out.data.par_chunks_mut(BLOCK * c).enumerate().for_each(|(k, chunk)| {
        let i0 = k * BLOCK;
        let rows = chunk.len() / c;
        // SAFETY: `t` is r x c and `wt` is r x c, both row-major; `chunk`
        // holds `rows` full output rows.
        unsafe {
            matrixmultiply::dgemm(
                rows,
                r,
                c,
                1.0,
                t.data.as_ptr().add(i0),
                1,
                c as isize,
                wt.as_ptr(),
                c as isize,
                1,
                0.0,
                chunk.as_mut_ptr(),
                c as isize,
                1,
            );
        }
    });
    Ok(out)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // row-major lower triangle, full storage
    l: Vec<f64>,
}

/// Block size of the factorization and of the parallel work split. Work is
/// partitioned into fixed blocks, so results do not depend on the thread
/// count.
const BLOCK: usize = 96;

impl Cholesky {
    /// Factors `a`, which is consumed as workspace. Only the lower triangle
    /// is read.
    pub fn factor(a: Matrix) -> Result<Self> {
        Self::factor_impl(a, None).map(|(c, _)| c)
    }

    /// Like [`Cholesky::factor`], but a pivot below `floor` times the
    /// largest diagonal entry is raised to that level, a dynamic
    /// regularization of nearly singular directions. Returns the factor and
    /// the number of raised pivots.
    pub fn factor_with_pivot_floor(a: Matrix, floor: f64) -> Result<(Self, usize)> {
        Self::factor_impl(a, Some(floor))
    }

    /// Right-looking blocked factorization: factor a diagonal block, solve
    /// the panel below it, then update the trailing lower triangle.
    fn factor_impl(mut a: Matrix, floor: Option<f64>) -> Result<(Self, usize)> {
        if !a.is_square() {
            return Err(Error::LengthMismatch { left: a.rows, right: a.cols });
        }
        let n = a.rows;
        let max_diag = (0..n).map(|i| a[(i, i)].abs()).fold(0.0f64, f64::max);
        let mut replaced = 0;
        let data = &mut a.data;
        let mut k0 = 0;
        while k0 < n {
            let k1 = (k0 + BLOCK).min(n);
            let nb = k1 - k0;
            for i in k0..k1 {
                for j in k0..i {
                    let mut s = data[i * n + j];
                    for p in k0..j {
                        s -= data[i * n + p] * data[j * n + p];
                    }
                    data[i * n + j] = s / data[j * n + j];
                }
                let mut d = data[i * n + i];
                for p in k0..i {
                    d -= data[i * n + p] * data[i * n + p];
                }
                match floor {
                    Some(f) if !d.is_nan() && d <= f * max_diag => {
                        data[i * n + i] = (f * max_diag).sqrt();
                        replaced += 1;
                    }
                    _ => {
                        if !(d > 0.0) || !d.is_finite() {
                            return Err(Error::Numerical(format!("matrix not positive definite at pivot {i}")));
                        }
                        data[i * n + i] = d.sqrt();
                    }
                }
            }
            if k1 == n {
                break;
            }
            let (head, tail) = data.split_at_mut(k1 * n);
            let diag = &head[k0 * n..];
            tail.par_chunks_mut(n).for_each(|row| {
                for j in 0..nb {
                    let lj = &diag[(j) * n + k0..(j) * n + k0 + j];
                    let s = dot(&row[k0..k0 + j], lj);
                    row[k0 + j] = (row[k0 + j] - s) / diag[j * n + k0 + j];
                }
            });
            let rest = n - k1;
            let mut panel = vec![0.0; rest * nb];
            for (r, row) in tail.chunks(n).enumerate() {
                panel[r * nb..(r + 1) * nb].copy_from_slice(&row[k0..k1]);
            }
            tail.par_chunks_mut(BLOCK * n).enumerate().for_each(|(c, chunk)| {
                let r0 = c * BLOCK;
                let rows = chunk.len() / n;
                let cols = r0 + rows;
                // SAFETY: the operands are disjoint buffers sized for the
                // given shapes and strides.
                unsafe {
                    matrixmultiply::dgemm(
                        rows,
                        nb,
                        cols,
                        -1.0,
                        panel.as_ptr().add(r0 * nb),
                        nb as isize,
                        1,
                        panel.as_ptr(),
                        1,
                        nb as isize,
                        1.0,
                        chunk.as_mut_ptr().add(k1),
                        n as isize,
                        1,
                    );
                }
            });
            k0 = k1;
        }
        for i in 0..n {
            for v in &mut data[i * n + i + 1..(i + 1) * n] {
                *v = 0.0;
            }
        }
        Ok((Self { n, l: a.data }, replaced))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            y[i] = (y[i] - dot(row, &y[..i])) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}
