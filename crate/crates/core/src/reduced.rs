//! The symmetry-reduced semidefinite program for `m` particles on a torus.
//!
//! Variables are indexed by distance classes `(i, j)` with
//! `0 <= i <= n1/2`, `0 <= j <= n2/2`, `i + j > 0`, sorted
//! lexicographically, and grouped as `[ybb | yww | ybw]`: the averaged
//! number of ordered black-black, white-white and mixed pairs whose
//! folded offset is `(i, j)`. For every frequency pair `(k, l)` the
//! program has one 2x2 PSD block and two scalar slacks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::conic::{format, AffineExpr, ConeBlock, ConeKind, ConicProblem, LinearRow, Term};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::spectra::cos_ratio;
use crate::torus::{Configuration, GridShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistanceClass {
    pub i: usize,
    pub j: usize,
}

impl DistanceClass {
    pub fn distance(&self) -> usize {
        self.i + self.j
    }

    /// Number of offsets `(dx, dy)` that fold onto this class.
    pub fn multiplicity(&self, shape: GridShape) -> usize {
        axis_multiplicity(self.i, shape.n1()) * axis_multiplicity(self.j, shape.n2())
    }
}

fn axis_multiplicity(i: usize, n: usize) -> usize {
    if i == 0 || 2 * i == n {
        1
    } else {
        2
    }
}

/// `cos(2 pi k i / n1) cos(2 pi l j / n2)`.
pub fn cosine_coefficient(shape: GridShape, k: usize, l: usize, i: usize, j: usize) -> Result<f64> {
    for (v, limit) in [(k, shape.half1()), (i, shape.half1()), (l, shape.half2()), (j, shape.half2())] {
        if v > limit {
            return Err(Error::IndexOutOfRange { index: v, limit });
        }
    }
    Ok(cos_ratio(k * i % shape.n1(), shape.n1()) * cos_ratio(l * j % shape.n2(), shape.n2()))
}

/// Which conic formulation to hand to the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConicForm {
    /// The linear program on the minimal face, see [`ReducedProgram::to_conic_face`].
    #[default]
    Face,
    /// One 2x2 PSD block and two slacks per frequency pair, as built.
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedProgram {
    shape: GridShape,
    m: usize,
    folded: bool,
    classes: Vec<DistanceClass>,
    blocks: Vec<(usize, usize)>,
    /// `blocks x classes`.
    coefficients: Matrix,
}

pub fn build_program(shape: GridShape, m: usize) -> Result<ReducedProgram> {
    if m > shape.n() {
        return Err(Error::InvalidParticleCount { m, n: shape.n() });
    }
    let mut classes = Vec::new();
    let mut blocks = Vec::new();
    for i in 0..=shape.half1() {
        for j in 0..=shape.half2() {
            blocks.push((i, j));
            if i + j > 0 {
                classes.push(DistanceClass { i, j });
            }
        }
    }
    let tab1: Vec<Vec<f64>> =
        (0..=shape.half1()).map(|k| (0..=shape.half1()).map(|i| cos_ratio(k * i % shape.n1(), shape.n1())).collect()).collect();
    let tab2: Vec<Vec<f64>> =
        (0..=shape.half2()).map(|l| (0..=shape.half2()).map(|j| cos_ratio(l * j % shape.n2(), shape.n2())).collect()).collect();
    let coefficients = Matrix::from_fn(blocks.len(), classes.len(), |t, c| {
        let (k, l) = blocks[t];
        tab1[k][classes[c].i] * tab2[l][classes[c].j]
    });
    Ok(ReducedProgram { shape, m, folded: false, classes, blocks, coefficients })
}

/// Merges the classes `(i, j)` and `(j, i)` of a square program. Folded
/// variables hold the sum over both orientations and the coefficient of a
/// merged class is the average of the two; blocks `(k, l)` and `(l, k)`
/// then coincide and only `k <= l` is kept.
pub fn fold_square(program: &ReducedProgram) -> Result<ReducedProgram> {
    let shape = program.shape;
    if !shape.is_square() {
        return Err(Error::Unsupported(format!("folding needs a square grid, got {shape}")));
    }
    if program.folded {
        return Ok(program.clone());
    }
    let classes: Vec<DistanceClass> = program.classes.iter().copied().filter(|c| c.i <= c.j).collect();
    let blocks: Vec<(usize, usize)> = program.blocks.iter().copied().filter(|(k, l)| k <= l).collect();
    let coefficients = Matrix::from_fn(blocks.len(), classes.len(), |t, c| {
        let (k, l) = blocks[t];
        let DistanceClass { i, j } = classes[c];
        let a = cosine_coefficient(shape, k, l, i, j).unwrap_or(f64::NAN);
        let b = cosine_coefficient(shape, k, l, j, i).unwrap_or(f64::NAN);
        0.5 * (a + b)
    });
    Ok(ReducedProgram { shape, m: program.m, folded: true, classes, blocks, coefficients })
}

/// `(dim S, dim S0)`: the dimension of the invariant subspace and the
/// number of its free variables once the two diagonal variables are fixed.
pub fn subspace_dims(n1: usize, n2: usize) -> Result<(usize, usize)> {
    let shape = GridShape::new(n1, n2)?;
    let a = shape.half1() + 1;
    let b = shape.half2() + 1;
    Ok(if shape.is_square() {
        (5 * a * (a + 1) / 2, 3 * a * (a + 1) / 2 - 1)
    } else {
        (5 * a * b, 3 * a * b - 1)
    })
}

impl ReducedProgram {
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_folded(&self) -> bool {
        self.folded
    }

    pub fn classes(&self) -> &[DistanceClass] {
        &self.classes
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_variables(&self) -> usize {
        3 * self.classes.len()
    }

    pub fn coefficient(&self, block: usize, class: usize) -> f64 {
        self.coefficients[(block, class)]
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.coefficients
    }

    pub fn bb_index(&self, class: usize) -> usize {
        class
    }

    pub fn ww_index(&self, class: usize) -> usize {
        self.classes.len() + class
    }

    pub fn bw_index(&self, class: usize) -> usize {
        2 * self.classes.len() + class
    }

    fn nf(&self) -> f64 {
        self.shape.n() as f64
    }

    /// `n / (i + j)` on the black-black variables.
    pub fn objective(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.num_variables()];
        for (k, class) in self.classes.iter().enumerate() {
            c[k] = self.nf() / class.distance() as f64;
        }
        c
    }

    pub fn equality_rhs(&self) -> f64 {
        self.nf() - 1.0
    }

    /// Constants `(m/n, (n-m)/n, m(m-1)/n, (n-m)(n-m-1)/n)`.
    pub fn constants(&self) -> [f64; 4] {
        let n = self.nf();
        let m = self.m as f64;
        [m / n, (n - m) / n, m * (m - 1.0) / n, (n - m) * (n - m - 1.0) / n]
    }

    pub fn objective_value(&self, y: &[f64]) -> f64 {
        crate::linalg::dot(&self.objective(), y)
    }

    fn segment_sum(&self, block: usize, y: &[f64], segment: usize) -> f64 {
        let c = self.classes.len();
        crate::linalg::dot(self.coefficients.row(block), &y[segment * c..(segment + 1) * c])
    }

    /// The 2x2 matrix of block `t` at `y`.
    pub fn block_matrix(&self, block: usize, y: &[f64]) -> [[f64; 2]; 2] {
        let [mb, mw, _, _] = self.constants();
        let off = 0.5 * self.segment_sum(block, y, 2);
        [[mb + self.segment_sum(block, y, 0), off], [off, mw + self.segment_sum(block, y, 1)]]
    }

    /// The two scalar slacks of block `t` at `y`.
    pub fn block_slacks(&self, block: usize, y: &[f64]) -> [f64; 2] {
        let [_, _, cb, cw] = self.constants();
        [cb - self.segment_sum(block, y, 0), cw - self.segment_sum(block, y, 1)]
    }

    pub fn check_point(&self, y: &[f64]) -> Result<FeasibilityReport> {
        if y.len() != self.num_variables() {
            return Err(Error::LengthMismatch { left: y.len(), right: self.num_variables() });
        }
        let mut report = FeasibilityReport {
            equality_residual: y.iter().sum::<f64>() - self.equality_rhs(),
            min_block_eigenvalue: f64::INFINITY,
            min_slack: f64::INFINITY,
            min_variable: y.iter().copied().fold(f64::INFINITY, f64::min),
        };
        for t in 0..self.blocks.len() {
            let [[p, q], [_, r]] = self.block_matrix(t, y);
            let low = 0.5 * (p + r) - (0.25 * (p - r) * (p - r) + q * q).sqrt();
            report.min_block_eigenvalue = report.min_block_eigenvalue.min(low);
            for s in self.block_slacks(t, y) {
                report.min_slack = report.min_slack.min(s);
            }
        }
        Ok(report)
    }

    /// The average of the embeddings of all placements of `m` particles.
    pub fn barycenter(&self) -> Vec<f64> {
        let n = self.nf();
        let m = self.m as f64;
        let pairs = n * (n - 1.0);
        let fractions = if pairs > 0.0 {
            [m * (m - 1.0) / pairs, (n - m) * (n - m - 1.0) / pairs, 2.0 * m * (n - m) / pairs]
        } else {
            [0.0; 3]
        };
        let mut y = vec![0.0; self.num_variables()];
        for (c, class) in self.classes.iter().enumerate() {
            let w = self.class_weight(class) as f64;
            for (segment, f) in fractions.iter().enumerate() {
                y[segment * self.classes.len() + c] = f * w;
            }
        }
        y
    }

    /// Offsets represented by a (possibly merged) class.
    fn class_weight(&self, class: &DistanceClass) -> usize {
        let base = class.multiplicity(self.shape);
        if self.folded && class.i != class.j {
            2 * base
        } else {
            base
        }
    }

    pub fn to_conic(&self) -> ConicProblem {
        let c = self.classes.len();
        let [mb, mw, cb, cw] = self.constants();
        let mut problem = ConicProblem::new(self.num_variables(), self.objective(), self.equality_rhs().max(0.0));
        problem.table = self.coefficients.clone();
        problem.equalities.push(LinearRow {
            terms: (0..self.num_variables()).map(|i| (i, 1.0)).collect(),
            rhs: self.equality_rhs(),
        });
        let table = |row: usize, offset: usize, scale: f64| vec![Term::Table { row, offset, scale }];
        for t in 0..self.blocks.len() {
            problem.blocks.push(ConeBlock {
                kind: ConeKind::Psd2,
                entries: vec![
                    AffineExpr { constant: mb, terms: table(t, 0, 1.0) },
                    AffineExpr { constant: 0.0, terms: table(t, 2 * c, 0.5) },
                    AffineExpr { constant: mw, terms: table(t, c, 1.0) },
                ],
            });
            problem.blocks.push(ConeBlock {
                kind: ConeKind::Nonneg,
                entries: vec![AffineExpr { constant: cb, terms: table(t, 0, -1.0) }],
            });
            problem.blocks.push(ConeBlock {
                kind: ConeKind::Nonneg,
                entries: vec![AffineExpr { constant: cw, terms: table(t, c, -1.0) }],
            });
        }
        problem.initial_point = Some(self.barycenter());
        problem
    }

    /// An equivalent linear program on the minimal face of the feasible set.
    ///
    /// Every embedded configuration satisfies the per-class identities
    /// `ybb + yww + ybw = w` (the offsets a class represents). With those
    /// rows, positive semidefiniteness pins the `(0, 0)` block to its slack
    /// bounds and every other block to a multiple of `[[1, -1], [-1, 1]]`,
    /// so the literal program has no interior point. The diagonal equalities
    /// of the other blocks fix `yww - ybb = (n - 2m)/n * w`, leaving a linear
    /// program in `ybb` alone: one equality row, `a >= 0` and the two slacks
    /// per block, and `yww, ybw >= 0` per class. See [`Self::lift_face_point`].
    /// The box bound is the largest `m/n * w` that `ybw >= 0` allows.
    pub fn to_conic_face(&self) -> ConicProblem {
        let c = self.classes.len();
        let [mb, mw, cb, cw] = self.constants();
        let shift = mw - mb;
        let objective = self.objective()[..c].to_vec();
        // ybw >= 0 caps every ybb at m/n times its class weight
        let upper = self.classes.iter().map(|class| mb * self.class_weight(class) as f64).fold(0.0, f64::max);
        let mut problem = ConicProblem::new(c, objective, upper);
        problem.table = self.coefficients.clone();
        problem.equalities.push(LinearRow { terms: (0..c).map(|q| (q, 1.0)).collect(), rhs: cb });
        let table = |row: usize, scale: f64| vec![Term::Table { row, offset: 0, scale }];
        let nonneg = |constant: f64, terms: Vec<Term>| ConeBlock { kind: ConeKind::Nonneg, entries: vec![AffineExpr { constant, terms }] };
        for (t, &(k, l)) in self.blocks.iter().enumerate() {
            if (k, l) == (0, 0) {
                continue;
            }
            problem.blocks.push(nonneg(mb, table(t, 1.0)));
            problem.blocks.push(nonneg(cb, table(t, -1.0)));
            // sum over classes of w * d is -1 away from the zero frequency
            problem.blocks.push(nonneg(cw + shift, table(t, -1.0)));
        }
        for (q, class) in self.classes.iter().enumerate() {
            let w = self.class_weight(class) as f64;
            if shift < 0.0 {
                problem.blocks.push(nonneg(shift * w, vec![Term::Var { index: q, coeff: 1.0 }]));
            }
            problem.blocks.push(nonneg(2.0 * mb * w, vec![Term::Var { index: q, coeff: -2.0 }]));
        }
        problem.initial_point = Some(self.barycenter()[..c].to_vec());
        problem
    }

    /// Expands a point of [`Self::to_conic_face`] to the full
    /// `[ybb | yww | ybw]` vector.
    pub fn lift_face_point(&self, ybb: &[f64]) -> Result<Vec<f64>> {
        let c = self.classes.len();
        if ybb.len() != c {
            return Err(Error::LengthMismatch { left: ybb.len(), right: c });
        }
        let [mb, mw, _, _] = self.constants();
        let mut y = vec![0.0; 3 * c];
        for (q, class) in self.classes.iter().enumerate() {
            let w = self.class_weight(class) as f64;
            y[q] = ybb[q];
            y[c + q] = ybb[q] + (mw - mb) * w;
            y[2 * c + q] = 2.0 * mb * w - 2.0 * ybb[q];
        }
        Ok(y)
    }

    pub fn to_conic_form(&self, form: ConicForm) -> ConicProblem {
        match form {
            ConicForm::Face => self.to_conic_face(),
            ConicForm::Literal => self.to_conic(),
        }
    }

    /// The program in the plain-text conic format of [`crate::conic::format`].
    pub fn export_text(&self) -> String {
        format::write_problem(&self.to_conic())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub equality_residual: f64,
    pub min_block_eigenvalue: f64,
    pub min_slack: f64,
    pub min_variable: f64,
}

impl FeasibilityReport {
    pub fn is_feasible(&self, tol: f64) -> bool {
        self.equality_residual.abs() <= tol && self.min_block_eigenvalue >= -tol && self.min_slack >= -tol && self.min_variable >= -tol
    }
}

/// A point of the reduced program built from a configuration, with the
/// exact ordered-pair counts behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePoint {
    pub ybb: Vec<f64>,
    pub yww: Vec<f64>,
    pub ybw: Vec<f64>,
    counts: [Vec<u64>; 3],
    n: usize,
}

impl FeasiblePoint {
    /// `[ybb | yww | ybw]`.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = self.ybb.clone();
        v.extend_from_slice(&self.yww);
        v.extend_from_slice(&self.ybw);
        v
    }

    /// Ordered pair counts per class: black-black, white-white, mixed.
    pub fn pair_counts(&self) -> &[Vec<u64>; 3] {
        &self.counts
    }

    /// Objective value in exact arithmetic.
    pub fn objective_exact(&self, program: &ReducedProgram) -> BigRational {
        let mut total = BigRational::zero();
        for (class, &count) in program.classes.iter().zip(&self.counts[0]) {
            if count > 0 {
                total += BigRational::new(BigInt::from(count), BigInt::from(class.distance()));
            }
        }
        total
    }

    /// Sum of all variables in exact arithmetic.
    pub fn equality_sum_exact(&self) -> BigRational {
        let total: u64 = self.counts.iter().flatten().sum();
        BigRational::new(BigInt::from(total), BigInt::from(self.n.max(1)))
    }
}

pub fn embed_configuration(program: &ReducedProgram, config: &Configuration) -> Result<FeasiblePoint> {
    let shape = program.shape;
    if config.shape() != shape {
        return Err(Error::Mismatch(format!("configuration on {} but program on {shape}", config.shape())));
    }
    if config.m() != program.m {
        return Err(Error::InvalidParticleCount { m: config.m(), n: program.m });
    }
    let nc = program.classes.len();
    let index = |(i, j): (usize, usize)| -> Option<usize> {
        let (i, j) = if program.folded && i > j { (j, i) } else { (i, j) };
        program.classes.binary_search(&DistanceClass { i, j }).ok()
    };
    let mut bb = vec![0u64; nc];
    let points: Vec<_> = config.points().collect();
    for &p in &points {
        for &q in &points {
            if p != q {
                let class = shape.fold_offset(shape.offset(p, q).0, shape.offset(p, q).1);
                bb[index(class).expect("every nonzero offset has a class")] += 1;
            }
        }
    }
    let m = config.m() as u64;
    let n = shape.n() as u64;
    let mut ww = vec![0u64; nc];
    let mut bw = vec![0u64; nc];
    for (c, class) in program.classes.iter().enumerate() {
        let w = program.class_weight(class) as u64;
        // ordered pairs starting at a black cell, per class
        let black_first = m * w;
        let mixed_one_way = black_first - bb[c];
        bw[c] = 2 * mixed_one_way;
        ww[c] = n * w - bb[c] - bw[c];
    }
    let nf = n as f64;
    let scale = |v: &[u64]| v.iter().map(|&x| x as f64 / nf).collect::<Vec<f64>>();
    Ok(FeasiblePoint {
        ybb: scale(&bb),
        yww: scale(&ww),
        ybw: scale(&bw),
        counts: [bb, ww, bw],
        n: shape.n(),
    })
}
