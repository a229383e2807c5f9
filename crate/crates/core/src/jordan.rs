//! The five-parameter Jordan algebra of `n x n` matrices that are constant
//! on the blocks induced by splitting the index set into the first `m`
//! and the last `n - m` indices, and its block diagonalization
//! `R + R + S^2`.
//!
//! Pattern (the diagonal of each block is `a` resp. `d`):
//!
//! ```text
//!   [ a b b | c c c ]
//!   [ b a b | c c c ]
//!   [ b b a | c c c ]
//!   [-------+-------]
//!   [ c c c | d e e ]
//!   [ c c c | e d e ]
//!   [ c c c | e e d ]
//! ```

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::torus::DENSE_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JnmElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    n: usize,
    m: usize,
}

impl JnmElement {
    /// Valid for `2 <= m <= n - 2`; outside that range some basis
    /// elements vanish.
    pub fn new(n: usize, m: usize, [a, b, c, d, e]: [f64; 5]) -> Result<Self> {
        if m < 2 || m + 2 > n {
            return Err(Error::Unsupported(format!("pattern needs 2 <= m <= n-2, got n={n}, m={m}")));
        }
        if ![a, b, c, d, e].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { a, b, c, d, e, n, m })
    }

    pub fn identity(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, [1.0, 0.0, 0.0, 1.0, 0.0])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::Mismatch(format!(
                "J({},{}) combined with J({},{})",
                self.n, self.m, other.n, other.m
            )));
        }
        let x = self.coefficients();
        let y = other.coefficients();
        Self::new(self.n, self.m, std::array::from_fn(|i| alpha * x[i] + beta * y[i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients().iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

pub fn jnm_square(x: &JnmElement) -> JnmElement {
    let (n, m) = (x.n as f64, x.m as f64);
    let JnmElement { a, b, c, d, e, .. } = *x;
    JnmElement {
        a: a * a + (m - 1.0) * b * b + (n - m) * c * c,
        b: 2.0 * a * b + (m - 2.0) * b * b + (n - m) * c * c,
        c: (a + (m - 1.0) * b) * c + (d + (n - m - 1.0) * e) * c,
        d: d * d + (n - m - 1.0) * e * e + m * c * c,
        e: 2.0 * d * e + (n - m - 2.0) * e * e + m * c * c,
        ..*x
    }
}

/// Image in `R + R + S^2`: the eigenvalue on the zero-sum vectors of the
/// first block, the same for the second block, and the action on the two
/// normalized block indicator vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiImage {
    pub s1: f64,
    pub s2: f64,
    pub m: [[f64; 2]; 2],
}

impl PhiImage {
    /// Componentwise square `(s1^2, s2^2, M^2)`.
    pub fn square(&self) -> PhiImage {
        let [[p, q], [r, s]] = self.m;
        PhiImage {
            s1: self.s1 * self.s1,
            s2: self.s2 * self.s2,
            m: [[p * p + q * r, p * q + q * s], [r * p + s * r, r * q + s * s]],
        }
    }

    pub fn max_abs_diff(&self, other: &PhiImage) -> f64 {
        let mut worst = (self.s1 - other.s1).abs().max((self.s2 - other.s2).abs());
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }

    /// Eigenvalues of the 2x2 part, ascending.
    pub fn block_eigenvalues(&self) -> [f64; 2] {
        let [[p, q], [_, s]] = self.m;
        let mean = 0.5 * (p + s);
        let radius = (0.25 * (p - s) * (p - s) + q * q).sqrt();
        [mean - radius, mean + radius]
    }
}

/// The basis images are
/// `J_A -> (1, 0, [[1,0],[0,0]])`, `J_B -> (-1, 0, [[m-1,0],[0,0]])`,
/// `J_C -> sqrt(m(n-m)) (0, 0, [[0,1],[1,0]])`, `J_D -> (0, 1, [[0,0],[0,1]])`,
/// `J_E -> (0, -1, [[0,0],[0,n-m-1]])`.
pub fn phi(x: &JnmElement) -> PhiImage {
    let (n, m) = (x.n as f64, x.m as f64);
    let off = x.c * (m * (n - m)).sqrt();
    PhiImage {
        s1: x.a - x.b,
        s2: x.d - x.e,
        m: [[x.a + (m - 1.0) * x.b, off], [off, x.d + (n - m - 1.0) * x.e]],
    }
}

pub fn expand_to_dense(x: &JnmElement) -> Result<Matrix> {
    if x.n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "pattern matrix dimension",
            size: x.n as u128,
            limit: DENSE_LIMIT as u128,
        });
    }
    let m = x.m;
    Ok(Matrix::from_fn(x.n, x.n, |i, j| match (i < m, j < m) {
        (true, true) if i == j => x.a,
        (true, true) => x.b,
        (false, false) if i == j => x.d,
        (false, false) => x.e,
        _ => x.c,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::symmetric_eigenvalues;

    fn el(n: usize, m: usize, c: [f64; 5]) -> JnmElement {
        JnmElement::new(n, m, c).unwrap()
    }

    #[test]
    fn square_examples() {
        let id = JnmElement::identity(9, 4).unwrap();
        assert_eq!(jnm_square(&id), id);
        let ones = el(8, 3, [1.0; 5]);
        assert_eq!(jnm_square(&ones).coefficients(), [8.0; 5]);
        assert!(JnmElement::new(5, 1, [0.0; 5]).is_err());
        assert!(JnmElement::new(5, 4, [0.0; 5]).is_err());
    }

    #[test]
    fn square_matches_dense_product() {
        let x = el(7, 3, [0.3, -1.2, 0.7, 2.0, -0.4]);
        let dense = expand_to_dense(&x).unwrap();
        let sq = dense.matmul(&dense).unwrap();
        let expected = expand_to_dense(&jnm_square(&x)).unwrap();
        assert!(sq.sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn phi_basis_images() {
        let ja = phi(&el(10, 4, [1.0, 0.0, 0.0, 0.0, 0.0]));
        assert_eq!((ja.s1, ja.s2, ja.m), (1.0, 0.0, [[1.0, 0.0], [0.0, 0.0]]));
        // J_A is idempotent, so its image must be too
        assert_eq!(ja.square(), ja);
        let jc = phi(&el(10, 4, [0.0, 0.0, 1.0, 0.0, 0.0]));
        assert!((jc.m[0][1] - 24f64.sqrt()).abs() < 1e-15);
        assert_eq!(jc.m[0][1], jc.m[1][0]);
        let je = phi(&el(10, 4, [0.0, 0.0, 0.0, 0.0, 1.0]));
        assert_eq!((je.s1, je.s2, je.m[1][1]), (0.0, -1.0, 5.0));
    }

    #[test]
    fn phi_is_a_homomorphism() {
        let x = el(9, 4, [0.5, -0.25, 1.5, -2.0, 0.75]);
        let lhs = phi(&jnm_square(&x));
        let rhs = phi(&x).square();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn dense_pattern() {
        let id = expand_to_dense(&JnmElement::identity(6, 2).unwrap()).unwrap();
        assert_eq!(id, Matrix::identity(6));
        let jb = expand_to_dense(&el(5, 2, [0.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(jb.data().iter().sum::<f64>(), 2.0);
        assert_eq!((jb[(0, 1)], jb[(1, 0)]), (1.0, 1.0));
    }

    #[test]
    fn dense_spectrum_matches_phi() {
        let x = el(9, 3, [1.25, 0.5, -0.75, 0.2, 0.9]);
        let image = phi(&x);
        let mut expected = vec![image.s1; 2];
        expected.extend(vec![image.s2; 5]);
        expected.extend(image.block_eigenvalues());
        expected.sort_by(f64::total_cmp);
        let dense = symmetric_eigenvalues(&expand_to_dense(&x).unwrap()).unwrap();
        for (a, b) in dense.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}
