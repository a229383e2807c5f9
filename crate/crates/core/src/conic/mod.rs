//! Linear conic programs over products of nonnegative rays and 2x2 PSD
//! cones, an interior-point solver for them, and rigorous dual bounds.
//!
//! The problem form is
//!
//! ```text
//! minimize    c'y
//! subject to  A y = b
//!             G_t(y) = h_t + sum_i y_i H_{t,i}  in K_t   for every block t
//!             0 <= y <= U
//! ```
//!
//! where `U` is only used when turning dual estimates into a certified
//! lower bound. Each entry of a block is an affine expression whose terms
//! are either single variables or a scaled row of a shared coefficient
//! table applied to a contiguous range of variables; the second form keeps
//! dense but highly structured programs compact.

mod cones;
pub mod format;
mod ipm;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use ipm::{solve, DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    /// Entries `[p, q, r]` of `[[p, q], [q, r]]`, which must be PSD.
    Psd2,
    /// A single entry, which must be nonnegative.
    Nonneg,
}

impl ConeKind {
    pub fn entries(self) -> usize {
        match self {
            ConeKind::Psd2 => 3,
            ConeKind::Nonneg => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Var { index: usize, coeff: f64 },
    /// `scale * sum_j table[row][j] * y[offset + j]`.
    Table { row: usize, offset: usize, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffineExpr {
    pub constant: f64,
    pub terms: Vec<Term>,
}

impl AffineExpr {
    pub fn constant(value: f64) -> Self {
        Self { constant: value, terms: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeBlock {
    pub kind: ConeKind,
    pub entries: Vec<AffineExpr>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearRow {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub equalities: Vec<LinearRow>,
    pub blocks: Vec<ConeBlock>,
    /// Shared coefficient rows referenced by [`Term::Table`].
    pub table: Matrix,
    /// A-priori bound on every variable at any optimal point.
    pub upper_bound: f64,
    /// Optional starting point; the solver shifts slacks into the interior.
    pub initial_point: Option<Vec<f64>>,
}

impl ConicProblem {
    pub fn new(num_vars: usize, objective: Vec<f64>, upper_bound: f64) -> Self {
        Self {
            num_vars,
            objective,
            equalities: Vec::new(),
            blocks: Vec::new(),
            table: Matrix::zeros(0, 0),
            upper_bound,
            initial_point: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n {
            return Err(Error::LengthMismatch { left: self.objective.len(), right: n });
        }
        if !self.upper_bound.is_finite() || self.upper_bound < 0.0 {
            return Err(Error::Mismatch(format!("upper bound {} must be finite and nonnegative", self.upper_bound)));
        }
        if !self.objective.iter().all(|v| v.is_finite()) || !self.table.is_finite() {
            return Err(Error::NonFinite);
        }
        for row in &self.equalities {
            if !row.rhs.is_finite() {
                return Err(Error::NonFinite);
            }
            for &(i, a) in &row.terms {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, limit: n });
                }
                if !a.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
        }
        for block in &self.blocks {
            if block.entries.len() != block.kind.entries() {
                return Err(Error::LengthMismatch { left: block.entries.len(), right: block.kind.entries() });
            }
            for expr in &block.entries {
                if !expr.constant.is_finite() {
                    return Err(Error::NonFinite);
                }
                for term in &expr.terms {
                    self.check_term(term)?;
                }
            }
        }
        if let Some(p) = &self.initial_point {
            if p.len() != n {
                return Err(Error::LengthMismatch { left: p.len(), right: n });
            }
        }
        Ok(())
    }

    fn check_term(&self, term: &Term) -> Result<()> {
        match *term {
            Term::Var { index, coeff } => {
                if index >= self.num_vars {
                    return Err(Error::IndexOutOfRange { index, limit: self.num_vars });
                }
                if !coeff.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
            Term::Table { row, offset, scale } => {
                if row >= self.table.rows() {
                    return Err(Error::IndexOutOfRange { index: row, limit: self.table.rows() });
                }
                if offset + self.table.cols() > self.num_vars {
                    return Err(Error::IndexOutOfRange { index: offset + self.table.cols(), limit: self.num_vars });
                }
                if !scale.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(())
    }

    /// Value of the linear part of `expr` at `y` (constant excluded).
    pub fn apply_terms(&self, expr: &AffineExpr, y: &[f64]) -> f64 {
        expr.terms
            .iter()
            .map(|term| match *term {
                Term::Var { index, coeff } => coeff * y[index],
                Term::Table { row, offset, scale } => {
                    let r = self.table.row(row);
                    scale * crate::linalg::dot(r, &y[offset..offset + r.len()])
                }
            })
            .sum()
    }

    pub fn eval(&self, expr: &AffineExpr, y: &[f64]) -> f64 {
        expr.constant + self.apply_terms(expr, y)
    }

    /// `grad += weight * d(expr)/dy`.
    pub fn add_adjoint(&self, expr: &AffineExpr, weight: f64, grad: &mut [f64]) {
        if weight == 0.0 {
            return;
        }
        for term in &expr.terms {
            match *term {
                Term::Var { index, coeff } => grad[index] += weight * coeff,
                Term::Table { row, offset, scale } => {
                    let w = weight * scale;
                    for (g, &t) in grad[offset..].iter_mut().zip(self.table.row(row)) {
                        *g += w * t;
                    }
                }
            }
        }
    }

    /// `grad += weight * |d(expr)/dy|` termwise, for rounding-error bounds.
    fn add_abs_adjoint(&self, expr: &AffineExpr, weight: f64, grad: &mut [f64]) {
        for term in &expr.terms {
            match *term {
                Term::Var { index, coeff } => grad[index] += weight * coeff.abs(),
                Term::Table { row, offset, scale } => {
                    let w = weight * scale.abs();
                    for (g, &t) in grad[offset..].iter_mut().zip(self.table.row(row)) {
                        *g += w * t.abs();
                    }
                }
            }
        }
    }

    /// Linear part of `expr` as sorted, merged `(index, coefficient)` pairs.
    pub fn expand(&self, expr: &AffineExpr) -> Vec<(usize, f64)> {
        let mut map = std::collections::BTreeMap::new();
        for term in &expr.terms {
            match *term {
                Term::Var { index, coeff } => *map.entry(index).or_insert(0.0) += coeff,
                Term::Table { row, offset, scale } => {
                    for (j, &t) in self.table.row(row).iter().enumerate() {
                        *map.entry(offset + j).or_insert(0.0) += scale * t;
                    }
                }
            }
        }
        map.into_iter().filter(|(_, v)| *v != 0.0).collect()
    }

    /// The value of every block at `y`.
    pub fn block_values(&self, y: &[f64]) -> Vec<BlockValue> {
        self.blocks
            .iter()
            .map(|block| match block.kind {
                ConeKind::Psd2 => {
                    let v: Vec<f64> = block.entries.iter().map(|e| self.eval(e, y)).collect();
                    BlockValue::Psd2([[v[0], v[1]], [v[1], v[2]]])
                }
                ConeKind::Nonneg => BlockValue::Nonneg(self.eval(&block.entries[0], y)),
            })
            .collect()
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        crate::linalg::dot(&self.objective, y)
    }
}

/// A block's value or dual multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockValue {
    Psd2([[f64; 2]; 2]),
    Nonneg(f64),
}

impl BlockValue {
    /// Smallest eigenvalue (the value itself for a scalar).
    pub fn min_eigenvalue(&self) -> f64 {
        match *self {
            BlockValue::Psd2(m) => sym2_eigen(m).0[0],
            BlockValue::Nonneg(v) => v,
        }
    }

    /// Euclidean projection onto the block's cone.
    pub fn project(&self) -> BlockValue {
        match *self {
            BlockValue::Psd2(m) => BlockValue::Psd2(psd2_project(m)),
            BlockValue::Nonneg(v) => BlockValue::Nonneg(v.max(0.0)),
        }
    }

    /// Largest entrywise difference to `other` of the same kind.
    pub fn max_abs_diff(&self, other: &BlockValue) -> f64 {
        match (self, other) {
            (BlockValue::Psd2(a), BlockValue::Psd2(b)) => {
                let mut worst = 0.0f64;
                for i in 0..2 {
                    for j in 0..2 {
                        worst = worst.max((a[i][j] - b[i][j]).abs());
                    }
                }
                worst
            }
            (BlockValue::Nonneg(a), BlockValue::Nonneg(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        }
    }
}

/// Ascending eigenvalues and the unit eigenvector of the smaller one.
fn sym2_eigen([[p, q], [_, r]]: [[f64; 2]; 2]) -> ([f64; 2], [f64; 2]) {
    let mean = 0.5 * (p + r);
    let half_diff = 0.5 * (p - r);
    let radius = half_diff.hypot(q);
    let values = [mean - radius, mean + radius];
    // eigenvector for mean - radius
    let vec = if radius == 0.0 {
        [1.0, 0.0]
    } else if half_diff <= 0.0 {
        let v = [radius - half_diff, -q];
        let norm = v[0].hypot(v[1]);
        [v[0] / norm, v[1] / norm]
    } else {
        let v = [q, -(half_diff + radius)];
        let norm = v[0].hypot(v[1]);
        [-v[0] / norm, -v[1] / norm]
    };
    (values, vec)
}

/// Nearest PSD matrix in the Frobenius norm: negative eigenvalues clipped.
pub fn psd2_project(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let sym = [[m[0][0], 0.5 * (m[0][1] + m[1][0])], [0.5 * (m[0][1] + m[1][0]), m[1][1]]];
    let ([low, high], v) = sym2_eigen(sym);
    if low >= 0.0 {
        return sym;
    }
    if high <= 0.0 {
        return [[0.0; 2]; 2];
    }
    // keep only the top eigenpair; its vector is orthogonal to v
    let u = [-v[1], v[0]];
    [[high * u[0] * u[0], high * u[0] * u[1]], [high * u[1] * u[0], high * u[1] * u[1]]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    NumericalFailure,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::MaxIter => "max_iter",
            SolveStatus::NumericalFailure => "numerical_failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicSolution {
    pub y: Vec<f64>,
    /// Multipliers of the equality rows.
    pub mu: Vec<f64>,
    /// Multipliers of the blocks, in the trace inner product.
    pub z: Vec<BlockValue>,
    pub primal_obj: f64,
    pub dual_obj: f64,
    /// `|primal_obj - dual_obj| / (1 + |primal_obj|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub status: SolveStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedBound {
    /// A valid lower bound on `c'y` over feasible `y` with `0 <= y <= U`.
    pub value: f64,
    /// `value` minus the dual objective of the projected multipliers.
    pub correction: f64,
    /// Largest entry change made when projecting the multipliers.
    pub projection_shift: f64,
    /// Sum of the negative reduced costs.
    pub negative_reduced_cost: f64,
}

/// Turns any multipliers into a rigorous lower bound by weak duality.
///
/// For feasible `y` with `0 <= y <= U` and PSD `Z_t`,
/// `c'y >= mu'b - sum <Z_t, h_t> + sum_i y_i rho_i` with reduced costs
/// `rho = c - A'mu - sum_t H_t^*(Z_t)`, and `y_i rho_i >= U min(0, rho_i)`.
pub fn extract_certified_bound(problem: &ConicProblem, solution: &ConicSolution) -> CertifiedBound {
    let n = problem.num_vars;
    let eps = f64::EPSILON;
    let projected: Vec<BlockValue> = solution.z.iter().map(BlockValue::project).collect();
    let projection_shift = solution
        .z
        .iter()
        .zip(&projected)
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0f64, f64::max);

    // rho and a running bound on the magnitude of the terms summed into it
    let mut rho = problem.objective.clone();
    let mut rho_abs: Vec<f64> = rho.iter().map(|v| v.abs()).collect();
    let mut count = 1usize;
    let mut value = 0.0;
    let mut value_abs = 0.0;
    for (row, &mu) in problem.equalities.iter().zip(&solution.mu) {
        let mu = if mu.is_finite() { mu } else { 0.0 };
        value += mu * row.rhs;
        value_abs += (mu * row.rhs).abs();
        for &(i, a) in &row.terms {
            rho[i] -= mu * a;
            rho_abs[i] += (mu * a).abs();
        }
        count += 1;
    }
    let mut abs_weight = vec![0.0; n];
    for (block, z) in problem.blocks.iter().zip(&projected) {
        let weights: Vec<f64> = match *z {
            BlockValue::Psd2(m) => vec![m[0][0], 2.0 * m[0][1], m[1][1]],
            BlockValue::Nonneg(v) => vec![v],
        };
        for (expr, &w) in block.entries.iter().zip(&weights) {
            let w = if w.is_finite() { w } else { 0.0 };
            value -= w * expr.constant;
            value_abs += (w * expr.constant).abs();
            problem.add_adjoint(expr, -w, &mut rho);
            problem.add_abs_adjoint(expr, w.abs(), &mut abs_weight);
        }
        count += 3;
    }
    for (ra, aw) in rho_abs.iter_mut().zip(&abs_weight) {
        *ra += aw;
    }
    let u = problem.upper_bound;
    let negative_reduced_cost: f64 = rho.iter().map(|r| r.min(0.0)).sum();
    let dual_value = value;
    let mut bound = value + u * negative_reduced_cost;
    let rounding = (count as f64 + 2.0) * eps * (value_abs + u * rho_abs.iter().sum::<f64>());
    bound -= rounding + 1e-9 * (1.0 + bound.abs());
    if !bound.is_finite() {
        bound = f64::NEG_INFINITY;
    }
    CertifiedBound {
        value: bound,
        correction: bound - dual_value,
        projection_shift,
        negative_reduced_cost,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        let psd = [[2.0, 1.0], [1.0, 2.0]];
        assert_eq!(psd2_project(psd), psd);
        let p = psd2_project([[1.0, 0.0], [0.0, -2.0]]);
        assert_eq!(p, [[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(psd2_project([[-1.0, 0.0], [0.0, -2.0]]), [[0.0; 2]; 2]);
        let p = psd2_project([[-2.0, 0.0], [0.0, 1.0]]);
        assert!((p[1][1] - 1.0).abs() < 1e-15 && p[0][0].abs() < 1e-15);
    }

    #[test]
    fn projection_is_nearest_on_a_grid() {
        let m = [[0.3, -1.1], [-1.1, -0.4]];
        let p = psd2_project(m);
        assert!(BlockValue::Psd2(p).min_eigenvalue() >= -1e-14);
        let dist = |a: [[f64; 2]; 2]| {
            ((a[0][0] - m[0][0]).powi(2) + 2.0 * (a[0][1] - m[0][1]).powi(2) + (a[1][1] - m[1][1]).powi(2)).sqrt()
        };
        let best = dist(p);
        let steps = 60;
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    let a = -0.5 + 2.0 * i as f64 / steps as f64;
                    let b = -1.5 + 2.0 * j as f64 / steps as f64;
                    let c = -0.5 + 2.0 * k as f64 / steps as f64;
                    if a >= 0.0 && c >= 0.0 && a * c >= b * b {
                        assert!(dist([[a, b], [b, c]]) >= best - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvector_of_smaller_eigenvalue() {
        for m in [[[1.0, 2.0], [2.0, -3.0]], [[-3.0, 0.5], [0.5, 4.0]], [[1.0, 0.0], [0.0, 1.0]]] {
            let ([low, _], v) = sym2_eigen(m);
            let mv = [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
            assert!((mv[0] - low * v[0]).abs() < 1e-12 && (mv[1] - low * v[1]).abs() < 1e-12);
        }
    }
}
