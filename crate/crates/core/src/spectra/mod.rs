//! Spectra of the potential matrix and the eigenvalue-type lower bounds.
//!
//! The potential matrix of a toric grid is a tensor product of symmetric
//! circulants, so its eigenvalues are cosine sums over the grid offsets and
//! its all-ones eigenvector carries the row sum. The projected eigenvalue
//! bound is implemented for general dense QAP data; on toric instances it
//! collapses to [`bdl_bound`], and the convex-quadratic refinement of it is
//! known to coincide with it there, so it is not computed.

mod eigen;
mod lap;

pub use eigen::{symmetric_eigen, symmetric_eigenvalues, SymmetricEigen};
pub use lap::{solve_lap, Assignment};

use std::f64::consts::PI;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::torus::{row_sum, DenseQap, GridShape, PotentialTable, DENSE_LIMIT};

/// `2 cos(2 pi m k / n)`, the `m`-th eigenvalue of the `k`-th symmetric
/// circulant basis matrix of order `n`.
pub fn circulant_eigenvalue(n: usize, k: usize, m_idx: usize) -> Result<f64> {
    if n == 0 || k > n / 2 {
        return Err(Error::IndexOutOfRange { index: k, limit: n / 2 });
    }
    if m_idx >= n {
        return Err(Error::IndexOutOfRange { index: m_idx, limit: n.saturating_sub(1) });
    }
    Ok(2.0 * cos_ratio((m_idx * k) % n, n))
}

/// `cos(2 pi r / n)` with `r` already reduced modulo `n`.
pub(crate) fn cos_ratio(r: usize, n: usize) -> f64 {
    (2.0 * PI * r as f64 / n as f64).cos()
}

/// `cos(2 pi r / n)` for `r = 0..n`.
pub(crate) fn cos_table(n: usize) -> Vec<f64> {
    (0..n).map(|r| cos_ratio(r, n)).collect()
}

/// Eigenvalues `lambda(p, q)` of the potential matrix, one per frequency pair.
#[derive(Debug, Clone)]
pub struct Spectrum2D {
    shape: GridShape,
    lambda: Vec<f64>,
}

impl Spectrum2D {
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.lambda[p * self.shape.n2() + q]
    }

    pub fn values(&self) -> &[f64] {
        &self.lambda
    }

    /// Eigenvalue of the all-ones vector.
    pub fn lambda_one(&self) -> f64 {
        self.lambda[0]
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.lambda.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Cosine sums `sum_{(i,j) != 0} f(i,j) cos(2 pi p i / n1) cos(2 pi q j / n2)`.
///
/// The sine parts cancel because the potential is even in each coordinate.
/// Summation runs over `j` first, then `i`, for every entry.
pub fn potential_spectrum(shape: GridShape) -> Spectrum2D {
    let (n1, n2) = (shape.n1(), shape.n2());
    let table = PotentialTable::new(shape);
    let c1 = cos_table(n1);
    let c2 = cos_table(n2);
    let origin = crate::torus::GridPoint::ORIGIN;
    // partial[i][q] = sum_j f(i, j) cos(2 pi q j / n2)
    let mut partial = vec![0.0; n1 * n2];
    for i in 0..n1 {
        for q in 0..n2 {
            let mut s = 0.0;
            for j in 0..n2 {
                s += table.between(origin, shape.point(i as i64, j as i64)) * c2[(q * j) % n2];
            }
            partial[i * n2 + q] = s;
        }
    }
    let mut lambda = vec![0.0; n1 * n2];
    for p in 0..n1 {
        for q in 0..n2 {
            let mut s = 0.0;
            for i in 0..n1 {
                s += c1[(p * i) % n1] * partial[i * n2 + q];
            }
            lambda[p * n2 + q] = s;
        }
    }
    Spectrum2D { shape, lambda }
}

/// `lambda_1 m^2/n + lambda_min (m - m^2/n)`, the optimum of the fractional
/// total energy relaxation.
pub fn bdl_bound(shape: GridShape, m: usize) -> Result<f64> {
    shape.check_count(m)?;
    let spectrum = potential_spectrum(shape);
    Ok(bdl_from_spectrum(&spectrum, m))
}

pub fn bdl_from_spectrum(spectrum: &Spectrum2D, m: usize) -> f64 {
    let n = spectrum.shape().n() as f64;
    let m = m as f64;
    let lambda_one = row_sum(spectrum.shape()).to_f64().unwrap_or(spectrum.lambda_one());
    lambda_one * m * m / n + spectrum.lambda_min() * (m - m * m / n)
}

/// `min_phi sum_i x_phi(i) y_i`, by pairing ascending `x` with descending `y`.
pub fn min_scalar_product(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(|a, b| b.total_cmp(a));
    Ok(dot(&xs, &ys))
}

/// Orthonormal basis of the complement of the all-ones vector.
#[derive(Debug, Clone)]
pub struct ProjectionBasis {
    v: Matrix,
}

impl ProjectionBasis {
    pub fn n(&self) -> usize {
        self.v.rows()
    }

    /// The `n x (n-1)` basis matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.v
    }

    /// `V^T M V`.
    pub fn project(&self, m: &Matrix) -> Result<Matrix> {
        self.v.transpose().matmul(&m.matmul(&self.v)?)
    }
}

/// Drops the first column of the Householder reflector sending `e/sqrt(n)`
/// to the first unit vector.
pub fn build_projection_basis(n: usize) -> Result<ProjectionBasis> {
    if n < 2 {
        return Err(Error::Unsupported(format!("projection basis needs n >= 2, got {n}")));
    }
    let inv_sqrt = 1.0 / (n as f64).sqrt();
    let mut w = vec![inv_sqrt; n];
    w[0] -= 1.0;
    let ww = dot(&w, &w);
    let v = Matrix::from_fn(n, n - 1, |i, j| {
        let col = j + 1;
        let delta = if i == col { 1.0 } else { 0.0 };
        delta - 2.0 * w[i] * w[col] / ww
    });
    Ok(ProjectionBasis { v })
}

/// The projected eigenvalue bound
/// `<lambda(A~), mu(B~)>^- + min_phi sum d_{i phi(i)} - (e'Ae)(e'Be)/n^2`
/// with `D = (2/n) A e e' B`.
pub fn projected_eigenvalue_bound(qap: &DenseQap) -> Result<f64> {
    let n = qap.a.rows();
    if !qap.a.is_square() || qap.b.rows() != n || !qap.b.is_square() {
        return Err(Error::LengthMismatch { left: qap.a.rows(), right: qap.b.rows() });
    }
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "dense QAP dimension",
            size: n as u128,
            limit: DENSE_LIMIT as u128,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let row_sums_a: Vec<f64> = (0..n).map(|i| qap.a.row(i).iter().sum()).collect();
    let col_sums_b: Vec<f64> = (0..n).map(|j| (0..n).map(|i| qap.b[(i, j)]).sum()).collect();
    let total_a: f64 = row_sums_a.iter().sum();
    let total_b: f64 = col_sums_b.iter().sum();
    let nf = n as f64;
    let d = Matrix::from_fn(n, n, |i, j| 2.0 / nf * row_sums_a[i] * col_sums_b[j]);
    let linear = solve_lap(&d)?.value;
    let constant = total_a * total_b / (nf * nf);
    if n == 1 {
        return Ok(linear - constant);
    }
    let basis = build_projection_basis(n)?;
    let lambda_a = symmetric_eigenvalues(&symmetrized(&basis.project(&qap.a)?))?;
    let mu_b = symmetric_eigenvalues(&symmetrized(&basis.project(&qap.b)?))?;
    Ok(min_scalar_product(&lambda_a, &mu_b)? + linear - constant)
}

// V^T M V is symmetric up to rounding in the products.
fn symmetrized(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{build_dense_qap, GridOrdering};

    fn s(n1: usize, n2: usize) -> GridShape {
        GridShape::new(n1, n2).unwrap()
    }

    #[test]
    fn circulant_eigenvalue_examples() {
        assert!((circulant_eigenvalue(4, 1, 2).unwrap() + 2.0).abs() < 1e-15);
        assert_eq!(circulant_eigenvalue(6, 0, 5).unwrap(), 2.0);
        let v = circulant_eigenvalue(5, 1, 1).unwrap();
        assert!((v - 0.6180339887).abs() < 1e-10);
        assert!(circulant_eigenvalue(6, 4, 0).is_err());
        assert!(circulant_eigenvalue(6, 1, 6).is_err());
    }

    #[test]
    fn spectrum_matches_dense_eigensolver() {
        for (n1, n2, tol) in [(4, 4, 1e-9), (3, 3, 1e-10), (5, 2, 1e-9), (1, 6, 1e-9)] {
            let shape = s(n1, n2);
            let spectrum = potential_spectrum(shape);
            let qap = build_dense_qap(shape, 0, &GridOrdering::row_major(shape)).unwrap();
            let dense = symmetric_eigenvalues(&qap.b).unwrap();
            for (a, b) in spectrum.sorted().iter().zip(&dense) {
                assert!((a - b).abs() < tol, "{shape}: {a} vs {b}");
            }
            let rs = row_sum(shape).to_f64().unwrap();
            assert!((spectrum.lambda_one() - rs).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_is_symmetric_under_negation() {
        for (n1, n2) in [(6, 6), (7, 4), (5, 9)] {
            let sp = potential_spectrum(s(n1, n2));
            for p in 0..n1 {
                for q in 0..n2 {
                    let mirrored = sp.get((n1 - p) % n1, (n2 - q) % n2);
                    assert!((sp.get(p, q) - mirrored).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bdl_examples() {
        assert!((bdl_bound(s(6, 6), 12).unwrap() - 41.466667).abs() < 1e-5);
        assert!((bdl_bound(s(6, 6), 18).unwrap() - 111.0).abs() < 1e-5);
        assert!((bdl_bound(s(10, 10), 50).unwrap() - 588.333333).abs() < 1e-5);
        assert!(bdl_bound(s(2, 2), 5).is_err());
    }

    #[test]
    fn min_scalar_product_examples() {
        assert_eq!(min_scalar_product(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 10.0);
        assert_eq!(min_scalar_product(&[5.0], &[5.0]).unwrap(), 25.0);
        assert!(min_scalar_product(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn projection_basis_properties() {
        let b = build_projection_basis(2).unwrap();
        let col = [b.matrix()[(0, 0)], b.matrix()[(1, 0)]];
        assert!((col[0].abs() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((col[0] + col[1]).abs() < 1e-15);
        assert!(build_projection_basis(1).is_err());
        for n in [2usize, 3, 10, 37, 50] {
            let v = build_projection_basis(n).unwrap();
            let vt = v.matrix().transpose();
            let gram = vt.matmul(v.matrix()).unwrap();
            assert!(gram.sub(&Matrix::identity(n - 1)).max_abs() <= 1e-12);
            let ones = vec![1.0; n];
            assert!(vt.mul_vec(&ones).iter().all(|x| x.abs() <= 1e-12));
            let proj = v.matrix().matmul(&vt).unwrap();
            let expected = Matrix::from_fn(n, n, |i, j| (i == j) as u8 as f64 - 1.0 / n as f64);
            assert!(proj.sub(&expected).max_abs() <= 1e-10);
        }
    }

    #[test]
    fn projected_bound_examples() {
        let shape = s(6, 6);
        let qap = build_dense_qap(shape, 12, &GridOrdering::row_major(shape)).unwrap();
        let pb = projected_eigenvalue_bound(&qap).unwrap();
        assert!((pb - 41.466667).abs() < 1e-4);
        assert!((pb - bdl_bound(shape, 12).unwrap()).abs() < 1e-9);
        let zero = DenseQap { a: Matrix::zeros(5, 5), b: Matrix::zeros(5, 5) };
        assert_eq!(projected_eigenvalue_bound(&zero).unwrap(), 0.0);
    }
}
