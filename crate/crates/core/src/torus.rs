//! The toric grid instance: Lee metric, inverse-distance potentials,
//! particle configurations and their exact energies.
//!
//! Coordinates are 0-based everywhere in the library. The text format used
//! by [`Configuration::to_text`] and [`Configuration::from_text`] is 1-based.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Largest `n` for which dense `n x n` matrices are materialized.
pub const DENSE_LIMIT: usize = 400;

/// An `n1 x n2` grid with wrap-around in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridShape {
    n1: usize,
    n2: usize,
}

impl GridShape {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidShape { n1, n2 });
        }
        Ok(Self { n1, n2 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Number of grid cells.
    pub fn n(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_square(&self) -> bool {
        self.n1 == self.n2
    }

    /// `floor(n1/2)`, the largest folded x-offset.
    pub fn half1(&self) -> usize {
        self.n1 / 2
    }

    /// `floor(n2/2)`, the largest folded y-offset.
    pub fn half2(&self) -> usize {
        self.n2 / 2
    }

    /// Largest Lee distance between two cells.
    pub fn max_distance(&self) -> usize {
        self.half1() + self.half2()
    }

    /// Builds a point, reducing both coordinates modulo the shape.
    pub fn point(&self, x: i64, y: i64) -> GridPoint {
        GridPoint {
            x: x.rem_euclid(self.n1 as i64) as usize,
            y: y.rem_euclid(self.n2 as i64) as usize,
        }
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        p.x < self.n1 && p.y < self.n2
    }

    /// Row-major index `n2*x + y`.
    pub fn index(&self, p: GridPoint) -> usize {
        self.n2 * p.x + p.y
    }

    pub fn point_at(&self, index: usize) -> GridPoint {
        GridPoint { x: index / self.n2, y: index % self.n2 }
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.n()).map(move |i| self.point_at(i))
    }

    /// Folds an offset to its distance class `(min(dx, n1-dx), min(dy, n2-dy))`.
    pub fn fold_offset(&self, dx: usize, dy: usize) -> (usize, usize) {
        let dx = dx % self.n1;
        let dy = dy % self.n2;
        (dx.min(self.n1 - dx), dy.min(self.n2 - dy))
    }

    /// Offset `q - p` reduced modulo the shape.
    pub fn offset(&self, p: GridPoint, q: GridPoint) -> (usize, usize) {
        ((q.x + self.n1 - p.x) % self.n1, (q.y + self.n2 - p.y) % self.n2)
    }

    pub fn translate(&self, p: GridPoint, dx: usize, dy: usize) -> GridPoint {
        GridPoint { x: (p.x + dx) % self.n1, y: (p.y + dy) % self.n2 }
    }

    pub(crate) fn check_point(&self, p: GridPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { x: p.x, y: p.y, n1: self.n1, n2: self.n2 })
        }
    }

    pub(crate) fn check_count(&self, m: usize) -> Result<()> {
        if m > self.n() {
            return Err(Error::InvalidParticleCount { m, n: self.n() });
        }
        Ok(())
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n1, self.n2)
    }
}

/// A grid cell, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub x: usize,
    pub y: usize,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 0, y: 0 };

    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

pub fn lee_distance(shape: GridShape, p: GridPoint, q: GridPoint) -> usize {
    let (dx, dy) = shape.offset(p, q);
    let (i, j) = shape.fold_offset(dx, dy);
    i + j
}

/// Inverse Lee distance, with zero on the diagonal.
pub fn potential(shape: GridShape, p: GridPoint, q: GridPoint) -> BigRational {
    match lee_distance(shape, p, q) {
        0 => BigRational::zero(),
        d => BigRational::new(BigInt::from(1), BigInt::from(d)),
    }
}

/// Sum of the potential from one cell to every other cell, the common row
/// sum of the potential matrix.
pub fn row_sum(shape: GridShape) -> BigRational {
    let mut counts = vec![0u64; shape.max_distance() + 1];
    for p in shape.points() {
        counts[lee_distance(shape, GridPoint::ORIGIN, p)] += 1;
    }
    weighted_inverse_sum(&counts)
}

/// `sum_d counts[d] / d` over `d >= 1`, exactly.
pub(crate) fn weighted_inverse_sum(counts: &[u64]) -> BigRational {
    let mut total = BigRational::zero();
    for (d, &c) in counts.iter().enumerate().skip(1) {
        if c > 0 {
            total += BigRational::new(BigInt::from(c), BigInt::from(d));
        }
    }
    total
}

/// A set of occupied cells on a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    shape: GridShape,
    occupied: BTreeSet<GridPoint>,
}

impl Configuration {
    pub fn new(shape: GridShape, points: impl IntoIterator<Item = GridPoint>) -> Result<Self> {
        let mut occupied = BTreeSet::new();
        for p in points {
            shape.check_point(p)?;
            if !occupied.insert(p) {
                return Err(Error::DuplicatePoint { x: p.x, y: p.y });
            }
        }
        Ok(Self { shape, occupied })
    }

    pub fn empty(shape: GridShape) -> Self {
        Self { shape, occupied: BTreeSet::new() }
    }

    pub fn full(shape: GridShape) -> Self {
        Self { shape, occupied: shape.points().collect() }
    }

    /// The parity class `{(x, y) : x + y even}`. A true checkerboard only
    /// when both sides are even.
    pub fn checkerboard(shape: GridShape) -> Self {
        Self { shape, occupied: shape.points().filter(|p| (p.x + p.y) % 2 == 0).collect() }
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn m(&self) -> usize {
        self.occupied.len()
    }

    pub fn contains(&self, p: GridPoint) -> bool {
        self.occupied.contains(&p)
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.occupied.iter().copied()
    }

    /// Occupancy as a row-major boolean mask.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.shape.n()];
        for p in &self.occupied {
            mask[self.shape.index(*p)] = true;
        }
        mask
    }

    pub fn translated(&self, dx: usize, dy: usize) -> Self {
        let occupied = self.occupied.iter().map(|&p| self.shape.translate(p, dx, dy)).collect();
        Self { shape: self.shape, occupied }
    }

    /// Mirror along the diagonal, `(x, y) -> (y, x)`. Square grids only.
    pub fn transposed(&self) -> Result<Self> {
        if !self.shape.is_square() {
            return Err(Error::Unsupported("transpose requires a square grid".into()));
        }
        let occupied = self.occupied.iter().map(|p| GridPoint::new(p.y, p.x)).collect();
        Ok(Self { shape: self.shape, occupied })
    }

    /// Histogram of Lee distances over ordered pairs of distinct particles.
    pub fn distance_histogram(&self) -> Vec<u64> {
        let pts: Vec<GridPoint> = self.points().collect();
        let mut counts = vec![0u64; self.shape.max_distance() + 1];
        for (a, &p) in pts.iter().enumerate() {
            for &q in &pts[a + 1..] {
                counts[lee_distance(self.shape, p, q)] += 2;
            }
        }
        counts
    }

    /// Serializes as `n1 n2` followed by one 1-based `x y` line per particle.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.shape.n1, self.shape.n2);
        for p in &self.occupied {
            out.push_str(&format!("{} {}\n", p.x + 1, p.y + 1));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) =
            lines.next().ok_or(Error::Parse { line: 1, msg: "missing 'n1 n2' header".into() })?;
        let (n1, n2) = parse_pair(line, header)?;
        let shape = GridShape::new(n1, n2).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        let mut points = Vec::new();
        for (line, text) in lines {
            let (x, y) = parse_pair(line, text)?;
            if x == 0 || y == 0 || x > n1 || y > n2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("coordinates ({x}, {y}) outside 1..={n1} x 1..={n2}"),
                });
            }
            points.push(GridPoint::new(x - 1, y - 1));
        }
        Self::new(shape, points)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or(Error::Parse { line, msg: "expected two integers".into() })?;
        tok.parse::<usize>()
            .map_err(|e| Error::Parse { line, msg: format!("bad integer {tok:?}: {e}") })
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "trailing tokens".into() });
    }
    Ok(pair)
}

/// Exact energy, summed over ordered pairs (each unordered pair twice).
pub fn energy(config: &Configuration) -> BigRational {
    weighted_inverse_sum(&config.distance_histogram())
}

pub fn energy_f64(config: &Configuration) -> f64 {
    energy(config).to_f64().unwrap_or(f64::NAN)
}

/// The occupied and empty cells swapped.
pub fn complement(config: &Configuration) -> Configuration {
    let occupied = config.shape.points().filter(|p| !config.contains(*p)).collect();
    Configuration { shape: config.shape, occupied }
}

/// Inverse Lee potential for every offset, as floats, indexed row-major by
/// `(dx, dy)`.
#[derive(Debug, Clone)]
pub struct PotentialTable {
    shape: GridShape,
    values: Vec<f64>,
}

impl PotentialTable {
    pub fn new(shape: GridShape) -> Self {
        let values = shape
            .points()
            .map(|p| match lee_distance(shape, GridPoint::ORIGIN, p) {
                0 => 0.0,
                d => 1.0 / d as f64,
            })
            .collect();
        Self { shape, values }
    }

    pub fn between(&self, p: GridPoint, q: GridPoint) -> f64 {
        let (dx, dy) = self.shape.offset(p, q);
        self.values[dx * self.shape.n2 + dy]
    }
}

/// An explicit order of the grid cells, used to lay out dense matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridOrdering {
    shape: GridShape,
    points: Vec<GridPoint>,
}

impl GridOrdering {
    /// `(x, y) -> n2*x + y`.
    pub fn row_major(shape: GridShape) -> Self {
        Self { shape, points: shape.points().collect() }
    }

    pub fn from_points(shape: GridShape, points: Vec<GridPoint>) -> Result<Self> {
        if points.len() != shape.n() {
            return Err(Error::LengthMismatch { left: points.len(), right: shape.n() });
        }
        let mut seen = vec![false; shape.n()];
        for &p in &points {
            shape.check_point(p)?;
            let i = shape.index(p);
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicatePoint { x: p.x, y: p.y });
            }
        }
        Ok(Self { shape, points })
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }
}

/// Koopmans-Beckmann data for the energy problem: `A` has an all-ones
/// `m x m` block in the top-left corner, `B` holds the potentials.
#[derive(Debug, Clone)]
pub struct DenseQap {
    pub a: Matrix,
    pub b: Matrix,
}

pub fn build_dense_qap(shape: GridShape, m: usize, ordering: &GridOrdering) -> Result<DenseQap> {
    shape.check_count(m)?;
    if ordering.shape != shape {
        return Err(Error::Mismatch(format!("ordering for {} used with {}", ordering.shape, shape)));
    }
    let n = shape.n();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "dense QAP dimension",
            size: n as u128,
            limit: DENSE_LIMIT as u128,
        });
    }
    let table = PotentialTable::new(shape);
    let a = Matrix::from_fn(n, n, |i, j| if i < m && j < m { 1.0 } else { 0.0 });
    let pts = ordering.points();
    let b = Matrix::from_fn(n, n, |i, j| table.between(pts[i], pts[j]));
    Ok(DenseQap { a, b })
}
