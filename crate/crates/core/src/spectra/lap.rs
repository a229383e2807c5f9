//! Linear assignment by the Hungarian method with row/column potentials.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// An optimal assignment: row `i` is matched with column `assignment[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub assignment: Vec<usize>,
    pub value: f64,
}

/// Minimizes `sum_i cost[i][assignment[i]]` over permutations, O(n^3).
pub fn solve_lap(cost: &Matrix) -> Result<Assignment> {
    if !cost.is_square() {
        return Err(Error::LengthMismatch { left: cost.rows(), right: cost.cols() });
    }
    if !cost.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = cost.rows();
    if n == 0 {
        return Ok(Assignment { assignment: Vec::new(), value: 0.0 });
    }
    // 1-based arrays with a virtual column 0
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[matched_row[j] - 1] = j - 1;
    }
    let value = assignment.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
    Ok(Assignment { assignment, value })
}
