//! Infeasible-start primal-dual interior-point method with Nesterov-Todd
//! scaling and Mehrotra's predictor-corrector.
//!
//! Internally the program is written in the standard form
//! `min c'x  s.t.  A x = b,  G x + s = h,  s in K`, where the first `N`
//! components of `K` are the rays `x_i >= 0` and every block contributes
//! a ray or a three-dimensional Lorentz cone. Search directions come from
//! the normal equations `G' W^{-2} G` in the variables, with the equality
//! rows eliminated through a Schur complement.

use std::collections::BTreeMap;

use log::{debug, info};
use rayon::prelude::*;

use super::cones::{self, Cone, NtScaling, ENTRY_MAP};
use super::{BlockValue, ConeKind, ConicProblem, ConicSolution, SolveStatus, Term};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm_inf, weighted_gram, Cholesky, Matrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

const STEP_FRACTION: f64 = 0.99;
const REGULARIZATION: f64 = 1e-9;
const REGULARIZATION_RETRIES: usize = 4;
const RUIZ_PASSES: usize = 10;
const REFINEMENT_STEPS: usize = 10;
const FULL_REFINEMENT_STEPS: usize = 20;
const PIVOT_FLOOR: f64 = 1e-15;
const STALL_LIMIT: usize = 5;
/// Refinement stops once a step fails to shrink the residual by this factor.
const REFINEMENT_PROGRESS: f64 = 0.5;

struct Layout {
    cones: Vec<Cone>,
    offsets: Vec<usize>,
    dim: usize,
    nvars: usize,
}

impl Layout {
    fn new(problem: &ConicProblem) -> Self {
        let mut cones = vec![Cone::Ray; problem.num_vars];
        cones.extend(problem.blocks.iter().map(|b| match b.kind {
            ConeKind::Psd2 => Cone::Lorentz3,
            ConeKind::Nonneg => Cone::Ray,
        }));
        let mut offsets = Vec::with_capacity(cones.len());
        let mut dim = 0;
        for c in &cones {
            offsets.push(dim);
            dim += c.dim();
        }
        Self { cones, offsets, dim, nvars: problem.num_vars }
    }

    fn slice<'v>(&self, k: usize, v: &'v [f64]) -> &'v [f64] {
        &v[self.offsets[k]..self.offsets[k] + self.cones[k].dim()]
    }

    fn identity(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim];
        for &o in &self.offsets {
            e[o] = 1.0;
        }
        e
    }

    fn min_margin(&self, v: &[f64]) -> f64 {
        (0..self.cones.len()).map(|k| cones::margin(self.cones[k], self.slice(k, v))).fold(f64::INFINITY, f64::min)
    }

    fn max_step(&self, v: &[f64], dv: &[f64]) -> f64 {
        (0..self.cones.len())
            .map(|k| cones::max_step(self.cones[k], self.slice(k, v), self.slice(k, dv)))
            .fold(f64::MAX, f64::min)
    }
}

/// Diagonal equilibration: the internal data are `E_A A D`, `E G D`,
/// `D c / cost`, with `E` constant on each cone.
struct Scaling {
    col: Vec<f64>,
    cone: Vec<f64>,
    eq: Vec<f64>,
    cost: f64,
}

impl Scaling {
    fn unit(problem: &ConicProblem, layout: &Layout) -> Self {
        Self {
            col: vec![1.0; problem.num_vars],
            cone: vec![1.0; layout.cones.len()],
            eq: vec![1.0; problem.equalities.len()],
            cost: 1.0,
        }
    }

    fn ruiz(problem: &ConicProblem, layout: &Layout) -> Self {
        let mut sc = Self::unit(problem, layout);
        let n = problem.num_vars;
        for _ in 0..RUIZ_PASSES {
            let mut col_max = vec![0.0f64; n];
            let mut eq_max = vec![0.0f64; problem.equalities.len()];
            let mut cone_max = vec![0.0f64; layout.cones.len()];
            for (r, row) in problem.equalities.iter().enumerate() {
                for &(j, a) in &row.terms {
                    let v = a.abs() * sc.eq[r] * sc.col[j];
                    eq_max[r] = eq_max[r].max(v);
                    col_max[j] = col_max[j].max(v);
                }
            }
            for i in 0..n {
                let v = sc.cone[i] * sc.col[i];
                cone_max[i] = v;
                col_max[i] = col_max[i].max(v);
            }
            for (t, block) in problem.blocks.iter().enumerate() {
                let k = n + t;
                let e = sc.cone[k];
                for expr in &block.entries {
                    for term in &expr.terms {
                        match *term {
                            Term::Var { index, coeff } => {
                                let v = coeff.abs() * e * sc.col[index];
                                cone_max[k] = cone_max[k].max(v);
                                col_max[index] = col_max[index].max(v);
                            }
                            Term::Table { row, offset, scale } => {
                                let w = scale.abs() * e;
                                for (jj, &tv) in problem.table.row(row).iter().enumerate() {
                                    let v = w * tv.abs() * sc.col[offset + jj];
                                    cone_max[k] = cone_max[k].max(v);
                                    col_max[offset + jj] = col_max[offset + jj].max(v);
                                }
                            }
                        }
                    }
                }
            }
            let balanced = |v: &[f64]| v.iter().all(|&x| x == 0.0 || (0.8..1.25).contains(&x));
            if balanced(&col_max) && balanced(&eq_max) && balanced(&cone_max) {
                break;
            }
            for (s, m) in sc.col.iter_mut().zip(&col_max) {
                if *m > 0.0 {
                    *s /= m.sqrt();
                }
            }
            for (s, m) in sc.eq.iter_mut().zip(&eq_max) {
                if *m > 0.0 {
                    *s /= m.sqrt();
                }
            }
            for (s, m) in sc.cone.iter_mut().zip(&cone_max) {
                if *m > 0.0 {
                    *s /= m.sqrt();
                }
            }
        }
        let scaled_cost = problem.objective.iter().zip(&sc.col).map(|(c, d)| (c * d).abs()).fold(0.0, f64::max);
        sc.cost = if scaled_cost > 0.0 { scaled_cost } else { 1.0 };
        sc
    }
}

/// The scaled operators `A`, `G`, their adjoints and the data vectors.
struct Ops<'a> {
    p: &'a ConicProblem,
    layout: &'a Layout,
    sc: &'a Scaling,
    c: Vec<f64>,
    b: Vec<f64>,
    h: Vec<f64>,
}

impl<'a> Ops<'a> {
    fn new(p: &'a ConicProblem, layout: &'a Layout, sc: &'a Scaling) -> Self {
        let c = p.objective.iter().zip(&sc.col).map(|(c, d)| c * d / sc.cost).collect();
        let b = p.equalities.iter().zip(&sc.eq).map(|(r, e)| r.rhs * e).collect();
        let mut h = vec![0.0; layout.dim];
        for (t, block) in p.blocks.iter().enumerate() {
            let k = layout.nvars + t;
            let o = layout.offsets[k];
            let e = sc.cone[k];
            match block.kind {
                ConeKind::Psd2 => {
                    let v = entry_map([block.entries[0].constant, block.entries[1].constant, block.entries[2].constant]);
                    for i in 0..3 {
                        h[o + i] = e * v[i];
                    }
                }
                ConeKind::Nonneg => h[o] = e * block.entries[0].constant,
            }
        }
        Self { p, layout, sc, c, b, h }
    }

    fn g_mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.layout.nvars;
        let y: Vec<f64> = x.iter().zip(&self.sc.col).map(|(a, d)| a * d).collect();
        let mut out = vec![0.0; self.layout.dim];
        for i in 0..n {
            out[i] = -self.sc.cone[i] * y[i];
        }
        let values: Vec<[f64; 3]> = self
            .p
            .blocks
            .par_iter()
            .map(|block| {
                let mut v = [0.0; 3];
                for (r, expr) in block.entries.iter().enumerate() {
                    v[r] = self.p.apply_terms(expr, &y);
                }
                match block.kind {
                    ConeKind::Psd2 => entry_map(v),
                    ConeKind::Nonneg => v,
                }
            })
            .collect();
        for (t, v) in values.iter().enumerate() {
            let k = n + t;
            let o = self.layout.offsets[k];
            let e = self.sc.cone[k];
            for i in 0..self.layout.cones[k].dim() {
                out[o + i] = -e * v[i];
            }
        }
        out
    }

    /// Entry-space weights of block `t` for the cone vector `z`.
    fn entry_weights(&self, t: usize, z: &[f64]) -> [f64; 3] {
        let k = self.layout.nvars + t;
        let zk = self.layout.slice(k, z);
        let e = self.sc.cone[k];
        match self.p.blocks[t].kind {
            ConeKind::Psd2 => {
                let mut u = [0.0; 3];
                for r in 0..3 {
                    u[r] = -e * (0..3).map(|i| ENTRY_MAP[i][r] * zk[i]).sum::<f64>();
                }
                u
            }
            ConeKind::Nonneg => [-e * zk[0], 0.0, 0.0],
        }
    }

    fn gt_mul(&self, z: &[f64]) -> Vec<f64> {
        let n = self.layout.nvars;
        let mut grad = vec![0.0; n];
        for i in 0..n {
            grad[i] = -self.sc.cone[i] * z[i];
        }
        for (t, block) in self.p.blocks.iter().enumerate() {
            let u = self.entry_weights(t, z);
            for (r, expr) in block.entries.iter().enumerate() {
                self.p.add_adjoint(expr, u[r], &mut grad);
            }
        }
        for (g, d) in grad.iter_mut().zip(&self.sc.col) {
            *g *= d;
        }
        grad
    }

    fn a_mul(&self, x: &[f64]) -> Vec<f64> {
        self.p
            .equalities
            .iter()
            .zip(&self.sc.eq)
            .map(|(row, e)| e * row.terms.iter().map(|&(j, a)| a * self.sc.col[j] * x[j]).sum::<f64>())
            .collect()
    }

    fn at_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.layout.nvars];
        for ((row, e), &vr) in self.p.equalities.iter().zip(&self.sc.eq).zip(v) {
            for &(j, a) in &row.terms {
                out[j] += e * a * self.sc.col[j] * vr;
            }
        }
        out
    }

    /// `G' W^{-2} G` for the given per-cone `W^{-2}` blocks.
    fn normal_matrix(&self, winv2: &[[[f64; 3]; 3]]) -> Matrix {
        let n = self.layout.nvars;
        let mut hm = Matrix::zeros(n, n);
        let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        let rows = self.p.table.rows();
        for (t, block) in self.p.blocks.iter().enumerate() {
            let k = n + t;
            let e2 = self.sc.cone[k] * self.sc.cone[k];
            let w = &winv2[k];
            let dim = block.kind.entries();
            let mut m = [[0.0; 3]; 3];
            match block.kind {
                ConeKind::Psd2 => {
                    for r in 0..3 {
                        for s in 0..3 {
                            let mut acc = 0.0;
                            for i in 0..3 {
                                for j in 0..3 {
                                    acc += ENTRY_MAP[i][r] * w[i][j] * ENTRY_MAP[j][s];
                                }
                            }
                            m[r][s] = e2 * acc;
                        }
                    }
                }
                ConeKind::Nonneg => m[0][0] = e2 * w[0][0],
            }
            for r in 0..dim {
                for s in 0..dim {
                    let weight = m[r][s];
                    if weight == 0.0 {
                        continue;
                    }
                    for ta in &block.entries[r].terms {
                        for tb in &block.entries[s].terms {
                            match (ta, tb) {
                                (
                                    Term::Table { row: ra, offset: oa, scale: sa },
                                    Term::Table { row: rb, offset: ob, scale: sb },
                                ) if ra == rb => {
                                    if oa <= ob {
                                        let wv = groups.entry((*oa, *ob)).or_insert_with(|| vec![0.0; rows]);
                                        wv[*ra] += weight * sa * sb;
                                    }
                                }
                                _ => self.outer_direct(&mut hm, ta, tb, weight),
                            }
                        }
                    }
                }
            }
        }
        let cols = self.p.table.cols();
        for ((oa, ob), w) in &groups {
            let k = weighted_gram(&self.p.table, w).expect("group weights match the table rows");
            for i in 0..cols {
                for j in 0..cols {
                    let v = k[(i, j)];
                    hm[(oa + i, ob + j)] += v;
                    if oa != ob {
                        hm[(ob + j, oa + i)] += v;
                    }
                }
            }
        }
        for i in 0..n {
            let di = self.sc.col[i];
            for j in 0..n {
                hm[(i, j)] *= di * self.sc.col[j];
            }
            let e = self.sc.cone[i] * di;
            hm[(i, i)] += e * e * winv2[i][0][0];
        }
        hm
    }

    fn outer_direct(&self, hm: &mut Matrix, ta: &Term, tb: &Term, weight: f64) {
        let expand = |t: &Term| -> Vec<(usize, f64)> {
            match *t {
                Term::Var { index, coeff } => vec![(index, coeff)],
                Term::Table { row, offset, scale } => {
                    self.p.table.row(row).iter().enumerate().map(|(j, v)| (offset + j, scale * v)).collect()
                }
            }
        };
        let a = expand(ta);
        let b = expand(tb);
        for &(i, va) in &a {
            for &(j, vb) in &b {
                hm[(i, j)] += weight * va * vb;
            }
        }
    }
}

fn entry_map(v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = ENTRY_MAP[i][0] * v[0] + ENTRY_MAP[i][1] * v[1] + ENTRY_MAP[i][2] * v[2];
    }
    out
}

struct Nt {
    scalings: Vec<NtScaling>,
}

impl Nt {
    fn new(layout: &Layout, s: &[f64], z: &[f64]) -> Self {
        let scalings = (0..layout.cones.len())
            .map(|k| NtScaling::new(layout.cones[k], layout.slice(k, s), layout.slice(k, z)))
            .collect();
        Self { scalings }
    }

    fn lambda(&self, layout: &Layout) -> Vec<f64> {
        let mut out = vec![0.0; layout.dim];
        for (k, nt) in self.scalings.iter().enumerate() {
            let o = layout.offsets[k];
            out[o..o + layout.cones[k].dim()].copy_from_slice(&nt.lambda[..layout.cones[k].dim()]);
        }
        out
    }

    fn map(&self, layout: &Layout, v: &[f64], inverse: bool) -> Vec<f64> {
        let mut out = vec![0.0; layout.dim];
        for (k, nt) in self.scalings.iter().enumerate() {
            let o = layout.offsets[k];
            let d = layout.cones[k].dim();
            if inverse {
                nt.apply_inv(layout.cones[k], &v[o..o + d], &mut out[o..o + d]);
            } else {
                nt.apply(layout.cones[k], &v[o..o + d], &mut out[o..o + d]);
            }
        }
        out
    }
}

fn cone_op(layout: &Layout, u: &[f64], v: &[f64], divide: bool) -> Vec<f64> {
    let mut out = vec![0.0; layout.dim];
    for k in 0..layout.cones.len() {
        let o = layout.offsets[k];
        let d = layout.cones[k].dim();
        if divide {
            cones::jordan_divide(layout.cones[k], &u[o..o + d], &v[o..o + d], &mut out[o..o + d]);
        } else {
            cones::jordan_product(layout.cones[k], &u[o..o + d], &v[o..o + d], &mut out[o..o + d]);
        }
    }
    out
}

/// Factorized reduced KKT system `[H A'; A 0]`.
struct Kkt<'o, 'a> {
    ops: &'o Ops<'a>,
    nt: &'o Nt,
    chol: Cholesky,
    schur: Option<Cholesky>,
}

impl<'o, 'a> Kkt<'o, 'a> {
    fn new(ops: &'o Ops<'a>, nt: &'o Nt) -> Result<Self> {
        let winv2: Vec<[[f64; 3]; 3]> =
            nt.scalings.iter().zip(&ops.layout.cones).map(|(s, &c)| s.inv_squared(c)).collect();
        let h = ops.normal_matrix(&winv2);
        if !h.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = h.rows();
        let mut reg = REGULARIZATION;
        let mut last_err = None;
        for _ in 0..REGULARIZATION_RETRIES {
            let mut hr = h.clone();
            for i in 0..n {
                hr[(i, i)] += reg;
            }
            match Cholesky::factor_with_pivot_floor(hr, PIVOT_FLOOR) {
                Ok((chol, replaced)) => {
                    if replaced > 0 {
                        log::trace!("{replaced} pivots raised to the floor");
                    }
                    let schur = Self::schur(ops, &chol, reg)?;
                    return Ok(Self { ops, nt, chol, schur });
                }
                Err(e) => {
                    debug!("normal matrix factorization failed with regularization {reg:e}: {e}");
                    last_err = Some(e);
                    reg *= 100.0;
                }
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Numerical("normal matrix factorization failed".into())))
    }

    fn schur(ops: &Ops<'a>, chol: &Cholesky, reg: f64) -> Result<Option<Cholesky>> {
        let p = ops.p.equalities.len();
        if p == 0 {
            return Ok(None);
        }
        let n = ops.layout.nvars;
        let mut cols = Vec::with_capacity(p);
        for r in 0..p {
            let mut unit = vec![0.0; p];
            unit[r] = 1.0;
            cols.push(chol.solve(&ops.at_mul(&unit)));
        }
        let mut s = Matrix::zeros(p, p);
        for j in 0..p {
            let a = ops.a_mul(&cols[j]);
            for i in 0..p {
                s[(i, j)] = a[i];
            }
        }
        let scale = (0..p).map(|i| s[(i, i)].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for i in 0..p {
            s[(i, i)] += reg * scale;
        }
        let _ = n;
        Cholesky::factor(s).map(Some)
    }

    fn solve_regularized(&self, r1: &[f64], r2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let hinv_r1 = self.chol.solve(r1);
        match &self.schur {
            None => (hinv_r1, Vec::new()),
            Some(schur) => {
                let mut rhs = self.ops.a_mul(&hinv_r1);
                for (v, r) in rhs.iter_mut().zip(r2) {
                    *v -= r;
                }
                let dy = schur.solve(&rhs);
                let mut t = r1.to_vec();
                for (v, a) in t.iter_mut().zip(self.ops.at_mul(&dy)) {
                    *v -= a;
                }
                (self.chol.solve(&t), dy)
            }
        }
    }

    /// `G' W^{-2} G x`.
    fn apply_normal(&self, x: &[f64]) -> Vec<f64> {
        let layout = self.ops.layout;
        let gx = self.ops.g_mul(x);
        let w1 = self.nt.map(layout, &gx, true);
        let w2 = self.nt.map(layout, &w1, true);
        self.ops.gt_mul(&w2)
    }

    fn solve(&self, r1: &[f64], r2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (mut dx, mut dy) = self.solve_regularized(r1, r2);
        let size = norm_inf(r1).max(norm_inf(r2)).max(f64::MIN_POSITIVE);
        let mut last = f64::INFINITY;
        for _ in 0..REFINEMENT_STEPS {
            let hx = self.apply_normal(&dx);
            let aty = self.ops.at_mul(&dy);
            let res1: Vec<f64> = (0..r1.len()).map(|i| r1[i] - hx[i] - aty[i]).collect();
            let ax = self.ops.a_mul(&dx);
            let res2: Vec<f64> = (0..r2.len()).map(|i| r2[i] - ax[i]).collect();
            let err = norm_inf(&res1).max(norm_inf(&res2));
            log::trace!("refinement residual {:.2e}", err / size);
            if err <= 1e-14 * size || err > REFINEMENT_PROGRESS * last {
                break;
            }
            last = err;
            let (cx, cy) = self.solve_regularized(&res1, &res2);
            for (a, b) in dx.iter_mut().zip(&cx) {
                *a += b;
            }
            for (a, b) in dy.iter_mut().zip(&cy) {
                *a += b;
            }
        }
        (dx, dy)
    }

    /// Solves the linearized system
    ///
    /// ```text
    /// A' dy + G' dz = b1,  A dx = b2,  G dx + ds = b3,  W dz + W^{-1} ds = b4.
    /// ```
    fn solve_full(&self, b1: &[f64], b2: &[f64], b3: &[f64], b4: &[f64]) -> Direction {
        let layout = self.ops.layout;
        let winv_b3 = self.nt.map(layout, b3, true);
        let t: Vec<f64> = b4.iter().zip(&winv_b3).map(|(a, b)| a - b).collect();
        let gt = self.ops.gt_mul(&self.nt.map(layout, &t, true));
        let r1: Vec<f64> = b1.iter().zip(&gt).map(|(a, b)| a - b).collect();
        let (dx, dy) = self.solve(&r1, b2);
        let gdx = self.ops.g_mul(&dx);
        let g_r: Vec<f64> = gdx.iter().zip(b3).map(|(a, b)| a - b).collect();
        let inner = self.nt.map(layout, &g_r, true);
        let u: Vec<f64> = inner.iter().zip(b4).map(|(a, b)| a + b).collect();
        let dz = self.nt.map(layout, &u, true);
        let wdz = self.nt.map(layout, &dz, false);
        let v: Vec<f64> = b4.iter().zip(&wdz).map(|(a, b)| a - b).collect();
        let ds = self.nt.map(layout, &v, false);
        Direction { dx, dy, ds, dz }
    }

    /// Newton direction for the residuals and the scaled complementarity
    /// target `q`, refined on the full linearized system.
    fn direction(&self, rx: &[f64], ry: &[f64], rz: &[f64], q: &[f64]) -> Direction {
        let layout = self.ops.layout;
        let neg = |v: &[f64]| v.iter().map(|a| -a).collect::<Vec<f64>>();
        let (b1, b2, b3) = (neg(rx), neg(ry), neg(rz));
        let size = [norm_inf(&b1), norm_inf(&b2), norm_inf(&b3), norm_inf(q)].into_iter().fold(f64::MIN_POSITIVE, f64::max);
        let mut d = self.solve_full(&b1, &b2, &b3, q);
        let mut last = f64::INFINITY;
        for _ in 0..FULL_REFINEMENT_STEPS {
            let aty = self.ops.at_mul(&d.dy);
            let gtz = self.ops.gt_mul(&d.dz);
            let e1: Vec<f64> = (0..b1.len()).map(|i| b1[i] - aty[i] - gtz[i]).collect();
            let adx = self.ops.a_mul(&d.dx);
            let e2: Vec<f64> = (0..b2.len()).map(|i| b2[i] - adx[i]).collect();
            let gdx = self.ops.g_mul(&d.dx);
            let e3: Vec<f64> = (0..b3.len()).map(|i| b3[i] - gdx[i] - d.ds[i]).collect();
            let wdz = self.nt.map(layout, &d.dz, false);
            let winv_ds = self.nt.map(layout, &d.ds, true);
            let e4: Vec<f64> = (0..q.len()).map(|i| q[i] - wdz[i] - winv_ds[i]).collect();
            let err = [norm_inf(&e1), norm_inf(&e2), norm_inf(&e3), norm_inf(&e4)].into_iter().fold(0.0, f64::max);
            log::trace!("full refinement residual {:.2e}", err / size);
            if err <= 1e-15 * size || err > REFINEMENT_PROGRESS * last {
                break;
            }
            last = err;
            let c = self.solve_full(&e1, &e2, &e3, &e4);
            for (a, b) in [(&mut d.dx, &c.dx), (&mut d.dy, &c.dy), (&mut d.ds, &c.ds), (&mut d.dz, &c.dz)] {
                for (u, v) in a.iter_mut().zip(b) {
                    *u += v;
                }
            }
        }
        d
    }
}

struct Direction {
    dx: Vec<f64>,
    dy: Vec<f64>,
    ds: Vec<f64>,
    dz: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Metrics {
    pobj: f64,
    dobj: f64,
    pres: f64,
    dres: f64,
    gap: f64,
}

impl Metrics {
    fn merit(&self) -> f64 {
        self.pres.max(self.dres).max(self.gap)
    }

    fn is_finite(&self) -> bool {
        self.pobj.is_finite() && self.dobj.is_finite() && self.pres.is_finite() && self.dres.is_finite()
    }
}

struct Unscaled {
    x: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    z: Vec<f64>,
}

fn unscale(layout: &Layout, sc: &Scaling, x: &[f64], y: &[f64], s: &[f64], z: &[f64]) -> Unscaled {
    let xu = x.iter().zip(&sc.col).map(|(a, d)| a * d).collect();
    let yu = y.iter().zip(&sc.eq).map(|(a, e)| a * e * sc.cost).collect();
    let mut su = vec![0.0; layout.dim];
    let mut zu = vec![0.0; layout.dim];
    for k in 0..layout.cones.len() {
        let o = layout.offsets[k];
        for i in o..o + layout.cones[k].dim() {
            su[i] = s[i] / sc.cone[k];
            zu[i] = z[i] * sc.cone[k] * sc.cost;
        }
    }
    Unscaled { x: xu, y: yu, s: su, z: zu }
}

fn residuals(ops: &Ops, x: &[f64], y: &[f64], s: &[f64], z: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut rx = ops.gt_mul(z);
    for ((r, a), c) in rx.iter_mut().zip(ops.at_mul(y)).zip(&ops.c) {
        *r += a + c;
    }
    let ry: Vec<f64> = ops.a_mul(x).iter().zip(&ops.b).map(|(a, b)| a - b).collect();
    let gx = ops.g_mul(x);
    let rz: Vec<f64> = (0..gx.len()).map(|i| gx[i] + s[i] - ops.h[i]).collect();
    (rx, ry, rz)
}

fn metrics(raw: &Ops, u: &Unscaled) -> Metrics {
    let (rx, ry, rz) = residuals(raw, &u.x, &u.y, &u.s, &u.z);
    let pobj = dot(&raw.c, &u.x);
    let dobj = -dot(&raw.b, &u.y) - dot(&raw.h, &u.z);
    let pres = (norm_inf(&ry) / (1.0 + norm_inf(&raw.b))).max(norm_inf(&rz) / (1.0 + norm_inf(&raw.h)));
    let dres = norm_inf(&rx) / (1.0 + norm_inf(&raw.c));
    let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
    Metrics { pobj, dobj, pres, dres, gap }
}

fn finish(problem: &ConicProblem, layout: &Layout, u: &Unscaled, m: &Metrics, status: SolveStatus, iterations: usize) -> ConicSolution {
    let n = layout.nvars;
    let z = problem
        .blocks
        .iter()
        .enumerate()
        .map(|(t, block)| {
            let zk = layout.slice(n + t, &u.z);
            match block.kind {
                ConeKind::Psd2 => BlockValue::Psd2(cones::cone_to_matrix([zk[0], zk[1], zk[2]])),
                ConeKind::Nonneg => BlockValue::Nonneg(zk[0]),
            }
        })
        .collect();
    ConicSolution {
        y: u.x.clone(),
        mu: u.y.iter().map(|v| -v).collect(),
        z,
        primal_obj: m.pobj,
        dual_obj: m.dobj,
        gap: m.gap,
        primal_residual: m.pres,
        dual_residual: m.dres,
        status,
        iterations,
    }
}

/// Solves `problem` to relative accuracy `tol` in at most `max_iter`
/// iterations. Solver trouble is reported through the status; errors are
/// only returned for malformed input.
pub fn solve(problem: &ConicProblem, tol: f64, max_iter: usize) -> Result<ConicSolution> {
    problem.validate()?;
    if !(1e-10..=1e-4).contains(&tol) {
        return Err(Error::Mismatch(format!("tolerance {tol:e} outside [1e-10, 1e-4]")));
    }
    let layout = Layout::new(problem);
    let scaling = Scaling::ruiz(problem, &layout);
    let unit = Scaling::unit(problem, &layout);
    let ops = Ops::new(problem, &layout, &scaling);
    let raw = Ops::new(problem, &layout, &unit);
    let n = layout.nvars;
    let p = problem.equalities.len();
    let nu = layout.cones.len() as f64;

    let mut x: Vec<f64> = match &problem.initial_point {
        Some(init) => init.iter().zip(&scaling.col).map(|(v, d)| v / d).collect(),
        None => vec![0.0; n],
    };
    if !x.iter().all(|v| v.is_finite()) {
        x = vec![0.0; n];
    }
    let mut y = vec![0.0; p];
    let gx = ops.g_mul(&x);
    let mut s: Vec<f64> = ops.h.iter().zip(&gx).map(|(h, g)| h - g).collect();
    let e = layout.identity();
    let worst = -layout.min_margin(&s);
    if worst >= -1e-8 {
        let shift = 1.0 + worst.max(0.0);
        for (v, ev) in s.iter_mut().zip(&e) {
            *v += shift * ev;
        }
    }
    let mut z = e.clone();

    let mut best: Option<(Unscaled, Metrics, usize)> = None;
    let mut status = SolveStatus::MaxIter;
    let mut stalls = 0;
    let mut iterations = 0;
    for iter in 0..=max_iter {
        iterations = iter;
        let u = unscale(&layout, &scaling, &x, &y, &s, &z);
        let m = metrics(&raw, &u);
        if !m.is_finite() {
            status = SolveStatus::NumericalFailure;
            break;
        }
        debug!(
            "iter {iter:3}  pobj {:+.10e}  dobj {:+.10e}  pres {:.2e}  dres {:.2e}  gap {:.2e}",
            m.pobj, m.dobj, m.pres, m.dres, m.gap
        );
        let converged = m.pres <= tol && m.dres <= tol && m.gap <= tol;
        if best.as_ref().is_none_or(|(_, bm, _)| m.merit() <= bm.merit()) || converged {
            best = Some((u, m, iter));
        }
        if converged {
            status = SolveStatus::Optimal;
            break;
        }
        if iter == max_iter {
            break;
        }

        let (rx, ry, rz) = residuals(&ops, &x, &y, &s, &z);
        let nt = Nt::new(&layout, &s, &z);
        let lambda = nt.lambda(&layout);
        let mu = dot(&s, &z) / nu;
        let kkt = match Kkt::new(&ops, &nt) {
            Ok(k) => k,
            Err(err) => {
                debug!("stopping: {err}");
                status = SolveStatus::NumericalFailure;
                break;
            }
        };

        // predictor
        let q_aff: Vec<f64> = lambda.iter().map(|v| -v).collect();
        let aff = kkt.direction(&rx, &ry, &rz, &q_aff);
        let alpha_aff = layout.max_step(&s, &aff.ds).min(layout.max_step(&z, &aff.dz)).min(1.0);
        let s_aff: Vec<f64> = (0..s.len()).map(|i| s[i] + alpha_aff * aff.ds[i]).collect();
        let z_aff: Vec<f64> = (0..z.len()).map(|i| z[i] + alpha_aff * aff.dz[i]).collect();
        let rho = (dot(&s_aff, &z_aff) / dot(&s, &z)).clamp(0.0, 1.0);
        let sigma = rho.powi(3);

        // corrector
        let ds_scaled = nt.map(&layout, &aff.ds, true);
        let dz_scaled = nt.map(&layout, &aff.dz, false);
        let cross = cone_op(&layout, &ds_scaled, &dz_scaled, false);
        let lambda_sq = cone_op(&layout, &lambda, &lambda, false);
        let target: Vec<f64> = (0..lambda.len()).map(|i| -lambda_sq[i] + sigma * mu * e[i] - cross[i]).collect();
        let q = cone_op(&layout, &lambda, &target, true);
        let dir = kkt.direction(&rx, &ry, &rz, &q);
        let alpha_max = layout.max_step(&s, &dir.ds).min(layout.max_step(&z, &dir.dz));
        let alpha = (STEP_FRACTION * alpha_max).min(1.0);
        if !alpha.is_finite() || alpha <= 0.0 {
            status = SolveStatus::NumericalFailure;
            break;
        }
        for (v, d) in x.iter_mut().zip(&dir.dx) {
            *v += alpha * d;
        }
        for (v, d) in y.iter_mut().zip(&dir.dy) {
            *v += alpha * d;
        }
        for (v, d) in s.iter_mut().zip(&dir.ds) {
            *v += alpha * d;
        }
        for (v, d) in z.iter_mut().zip(&dir.dz) {
            *v += alpha * d;
        }
        if alpha < 1e-8 {
            stalls += 1;
            if stalls >= STALL_LIMIT {
                debug!("stopping: step length stalled");
                status = SolveStatus::NumericalFailure;
                break;
            }
        } else {
            stalls = 0;
        }
    }
    let (u, m, at) = best.expect("at least one iterate is evaluated");
    if status == SolveStatus::Optimal {
        info!("conic solve: optimal after {at} iterations, objective {:.10}", m.pobj);
    } else {
        info!(
            "conic solve: {status} after {iterations} iterations; best iterate {at}: pobj {:.10} dobj {:.10} merit {:.2e}",
            m.pobj,
            m.dobj,
            m.merit()
        );
    }
    Ok(finish(problem, &layout, &u, &m, status, iterations))
}
