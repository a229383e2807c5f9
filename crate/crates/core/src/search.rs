//! Upper bounds and constructions: simulated annealing, lattice
//! configurations generated by translations, the sharp-case sweep and an
//! exhaustive oracle for small instances.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{certify_optimal, sdp_lower_bound, Certificate};
use crate::conic::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::reduced::ConicForm;
use crate::torus::{energy, lee_distance, weighted_inverse_sum, Configuration, GridPoint, GridShape, PotentialTable};

/// Attempts at finding a free neighbouring cell before a move is skipped.
const MOVE_RETRIES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnealParams {
    pub iterations: u64,
    pub seed: u64,
    pub restarts: usize,
}

impl AnnealParams {
    pub fn new(iterations: u64, seed: u64, restarts: usize) -> Result<Self> {
        if iterations == 0 || restarts == 0 {
            return Err(Error::Unsupported("iterations and restarts must be positive".into()));
        }
        Ok(Self { iterations, seed, restarts })
    }
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self { iterations: 1_000_000, seed: 0, restarts: 5 }
    }
}

/// Best configuration over all restarts, re-scored exactly. Restart `k`
/// draws from the ChaCha8 stream `k` of `seed`, so results do not depend
/// on scheduling. The empty and the full grid are returned directly.
pub fn simulated_annealing(shape: GridShape, m: usize, params: &AnnealParams) -> Result<(Configuration, BigRational)> {
    let n = shape.n();
    if m > n {
        return Err(Error::InvalidParticleCount { m, n });
    }
    if params.iterations == 0 || params.restarts == 0 {
        return Err(Error::Unsupported("iterations and restarts must be positive".into()));
    }
    if m == 0 || m == n {
        let config = if m == 0 { Configuration::empty(shape) } else { Configuration::full(shape) };
        let e = energy(&config);
        return Ok((config, e));
    }
    let table = PotentialTable::new(shape);
    let runs: Vec<Configuration> = (0..params.restarts)
        .into_par_iter()
        .map(|k| anneal_once(shape, m, params.iterations, params.seed, k as u64, &table))
        .collect::<Result<_>>()?;
    let mut best: Option<(Configuration, BigRational)> = None;
    for config in runs {
        let e = energy(&config);
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((config, e));
        }
    }
    Ok(best.expect("at least one restart"))
}

fn anneal_once(shape: GridShape, m: usize, iterations: u64, seed: u64, stream: u64, table: &PotentialTable) -> Result<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let n = shape.n();
    let mut points: Vec<GridPoint> = sample(&mut rng, n, m).into_iter().map(|i| shape.point_at(i)).collect();
    let mut occupied = vec![false; n];
    for p in &points {
        occupied[shape.index(*p)] = true;
    }
    let field = |points: &[GridPoint], skip: usize, c: GridPoint| -> f64 {
        points.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &q)| table.between(c, q)).sum()
    };
    let mut val: f64 = (0..m).map(|k| field(&points, k, points[k])).sum();
    let mut best_val = val;
    let mut best = points.clone();
    let mut temperature = 1.0f64;
    let decay = (-(iterations as f64).ln() / iterations as f64).exp();
    for _ in 0..iterations {
        temperature *= decay;
        let mut proposal = None;
        for _ in 0..MOVE_RETRIES {
            let k = rng.random_range(0..m);
            let p = points[k];
            let q = match rng.random_range(0..4u8) {
                0 => shape.point(p.x as i64 + 1, p.y as i64),
                1 => shape.point(p.x as i64 - 1, p.y as i64),
                2 => shape.point(p.x as i64, p.y as i64 + 1),
                _ => shape.point(p.x as i64, p.y as i64 - 1),
            };
            if !occupied[shape.index(q)] {
                proposal = Some((k, q));
                break;
            }
        }
        let Some((k, q)) = proposal else { continue };
        let p = points[k];
        let delta = 2.0 * (field(&points, k, q) - field(&points, k, p));
        if delta < 0.0 || (-delta / temperature).exp() >= rng.random::<f64>() {
            occupied[shape.index(p)] = false;
            occupied[shape.index(q)] = true;
            points[k] = q;
            val += delta;
            if val < best_val {
                best_val = val;
                best.clone_from(&points);
            }
        }
    }
    Configuration::new(shape, best)
}

/// A translation `(gx, gy)` of the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub gx: usize,
    pub gy: usize,
}

impl Generator {
    pub fn new(shape: GridShape, gx: usize, gy: usize) -> Result<Self> {
        if gx >= shape.n1() {
            return Err(Error::IndexOutOfRange { index: gx, limit: shape.n1() - 1 });
        }
        if gy >= shape.n2() {
            return Err(Error::IndexOutOfRange { index: gy, limit: shape.n2() - 1 });
        }
        if gx == 0 && gy == 0 {
            return Err(Error::ZeroGenerator);
        }
        Ok(Self { gx, gy })
    }

    /// Parses `"gx,gy;gx,gy;..."`.
    pub fn parse_list(text: &str) -> Result<Vec<(usize, usize)>> {
        let err = |msg: String| Error::Parse { line: 1, msg };
        text.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|pair| {
                let (a, b) = pair.split_once(',').ok_or_else(|| err(format!("expected `gx,gy`, got `{pair}`")))?;
                let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| err(format!("bad integer `{s}`")));
                Ok((parse(a)?, parse(b)?))
            })
            .collect()
    }

    pub fn format_list(gens: &[Generator]) -> String {
        gens.iter().map(|g| format!("{},{}", g.gx, g.gy)).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.gx, self.gy)
    }
}

/// Number of points visited by repeatedly shifting one point by `g`.
pub fn orbit_size(shape: GridShape, g: Generator) -> Result<usize> {
    if g.gx == 0 && g.gy == 0 {
        return Err(Error::ZeroGenerator);
    }
    let cycle = |n: usize, v: usize| n / n.gcd(&(v % n));
    Ok(cycle(shape.n1(), g.gx).lcm(&cycle(shape.n2(), g.gy)))
}

/// Closure of the origin under all generator shifts.
pub fn generate_lattice(shape: GridShape, gens: &[Generator]) -> Result<Configuration> {
    if gens.is_empty() {
        return Err(Error::Unsupported("at least one generator is required".into()));
    }
    for g in gens {
        Generator::new(shape, g.gx, g.gy)?;
    }
    Configuration::new(shape, subgroup(shape, gens).into_iter().map(|i| shape.point_at(i)))
}

/// Cell indices of the subgroup generated by `gens`, sorted.
fn subgroup(shape: GridShape, gens: &[Generator]) -> Vec<usize> {
    let mut seen = vec![false; shape.n()];
    let mut stack = vec![GridPoint::ORIGIN];
    seen[0] = true;
    let mut out = vec![0];
    while let Some(p) = stack.pop() {
        for g in gens {
            let q = shape.translate(p, g.gx, g.gy);
            let i = shape.index(q);
            if !seen[i] {
                seen[i] = true;
                out.push(i);
                stack.push(q);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Exact energy of the lattice through the origin: every point sees the
/// same set of offsets, so `m` times the potential summed over the group.
fn lattice_energy(shape: GridShape, cells: &[usize]) -> BigRational {
    let mut counts = vec![0u64; shape.max_distance() + 1];
    for &i in cells {
        counts[lee_distance(shape, GridPoint::ORIGIN, shape.point_at(i))] += cells.len() as u64;
    }
    weighted_inverse_sum(&counts)
}

/// One subgroup of order `m` with a generating set of at most two
/// translations whose orbits meet only at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub generators: Vec<Generator>,
    pub energy: BigRational,
}

/// All subgroups of order `m`, each once, in the order their first
/// generating set appears (single generators first, then pairs in
/// lexicographic order).
pub fn enumerate_lattices(shape: GridShape, m: usize) -> Result<Vec<Lattice>> {
    let n = shape.n();
    if m == 0 || n % m != 0 {
        return Err(Error::Unsupported(format!("lattices need m dividing {n}, got {m}")));
    }
    let gens: Vec<Generator> = (1..n).map(|i| shape.point_at(i)).map(|p| Generator { gx: p.x, gy: p.y }).collect();
    let orbits: Vec<Vec<usize>> = gens.iter().map(|g| subgroup(shape, std::slice::from_ref(g))).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |generators: Vec<Generator>, cells: Vec<usize>, seen: &mut HashSet<Vec<usize>>| {
        if seen.insert(cells.clone()) {
            out.push(Lattice { energy: lattice_energy(shape, &cells), generators });
        }
    };
    if m == 1 {
        push(Vec::new(), vec![0], &mut seen);
        return Ok(out);
    }
    for (g, orbit) in gens.iter().zip(&orbits) {
        if orbit.len() == m {
            push(vec![*g], orbit.clone(), &mut seen);
        }
    }
    for a in 0..gens.len() {
        let la = orbits[a].len();
        if la == 1 || la >= m || m % la != 0 {
            continue;
        }
        for b in a + 1..gens.len() {
            if la * orbits[b].len() != m || !meet_only_at_origin(&orbits[a], &orbits[b]) {
                continue;
            }
            let generators = vec![gens[a], gens[b]];
            let cells = subgroup(shape, &generators);
            debug_assert_eq!(cells.len(), m);
            push(generators, cells, &mut seen);
        }
    }
    Ok(out)
}

fn meet_only_at_origin(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (1, 1);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Largest `n1 * n2` the sweep accepts.
    pub max_cells: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub form: ConicForm,
    /// Keep instances that do not certify as well.
    pub keep_all: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { max_cells: 2500, tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, form: ConicForm::Face, keep_all: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub shape: GridShape,
    pub m: usize,
    pub generators: Vec<Generator>,
    pub certificate: Certificate,
}

impl SweepEntry {
    pub const CSV_HEADER: &'static str = "n1,n2,m,generators,ub_energy_exact,sdp_bound,gap,r,certified";

    pub fn csv_row(&self) -> String {
        let c = &self.certificate;
        format!(
            "{},{},{},\"{}\",{}/{},{:.9},{:.3e},{}/{},{}",
            self.shape.n1(),
            self.shape.n2(),
            self.m,
            Generator::format_list(&self.generators),
            c.upper_energy.numer(),
            c.upper_energy.denom(),
            c.lower_bound,
            c.gap,
            c.r.numer(),
            c.r.denom(),
            c.is_optimal
        )
    }
}

/// Shapes `n2 <= n1` up to the bounds and every `m` dividing `n` with
/// `2 <= m < n`: the lowest-energy lattice of order `m` against the
/// certified bound of the reduced program. Entries are ordered by
/// `(n1, n2, m)`.
pub fn sweep_sharp_cases(max_n1: usize, max_n2: usize, options: &SweepOptions) -> Result<Vec<SweepEntry>> {
    if max_n1.saturating_mul(max_n2) > options.max_cells {
        return Err(Error::TooLarge { what: "sweep grid", size: (max_n1 * max_n2) as u128, limit: options.max_cells as u128 });
    }
    let mut tasks = Vec::new();
    for n1 in 1..=max_n1 {
        for n2 in 1..=max_n2.min(n1) {
            let n = n1 * n2;
            for m in 2..n {
                if n % m == 0 {
                    tasks.push((GridShape::new(n1, n2)?, m));
                }
            }
        }
    }
    let results: Vec<Option<SweepEntry>> =
        tasks.into_par_iter().map(|(shape, m)| sweep_instance(shape, m, options)).collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}

fn sweep_instance(shape: GridShape, m: usize, options: &SweepOptions) -> Result<Option<SweepEntry>> {
    let lattices = enumerate_lattices(shape, m)?;
    let Some(best) = lattices.iter().min_by(|a, b| a.energy.cmp(&b.energy)) else {
        return Ok(None);
    };
    let config = generate_lattice(shape, &best.generators)?;
    let (bound, _) = sdp_lower_bound(shape, m, options.form, options.tol, options.max_iter)?;
    let certificate = certify_optimal(&config, &bound)?;
    if !certificate.is_optimal && !options.keep_all {
        return Ok(None);
    }
    Ok(Some(SweepEntry { shape, m, generators: best.generators.clone(), certificate }))
}

/// Default bound on the number of placements the oracle enumerates.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Exact optimum by enumerating placements with one particle pinned at the
/// origin (every configuration has a translate of that form).
pub fn brute_force_optimum(shape: GridShape, m: usize, limit: u128) -> Result<(Configuration, BigRational)> {
    let n = shape.n();
    if m > n {
        return Err(Error::InvalidParticleCount { m, n });
    }
    let count = binomial(n as u128, m as u128);
    if count > limit {
        return Err(Error::TooLarge { what: "enumeration", size: count, limit });
    }
    if m == 0 {
        let config = Configuration::empty(shape);
        return Ok((config, BigRational::from_integer(0.into())));
    }
    let potentials = PotentialTable::new(shape);
    let table: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| potentials.between(shape.point_at(i), shape.point_at(j))).collect()).collect();
    let mut search = Enumeration { table: &table, m, chosen: vec![0], best: f64::INFINITY, candidates: Vec::new() };
    search.extend(1, 0.0);
    let mut best: Option<(Configuration, BigRational)> = None;
    for (_, cells) in search.candidates {
        let config = Configuration::new(shape, cells.into_iter().map(|i| shape.point_at(i)))?;
        let e = energy(&config);
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((config, e));
        }
    }
    Ok(best.expect("the pinned placement exists"))
}

/// Float depth-first enumeration; placements within a small window of the
/// float minimum are kept and decided exactly afterwards.
struct Enumeration<'t> {
    table: &'t [Vec<f64>],
    m: usize,
    chosen: Vec<usize>,
    best: f64,
    candidates: Vec<(f64, Vec<usize>)>,
}

const TIE_WINDOW: f64 = 1e-9;

impl Enumeration<'_> {
    fn extend(&mut self, next: usize, partial: f64) {
        if self.chosen.len() == self.m {
            let e = 2.0 * partial;
            if e < self.best {
                self.best = e;
                let cutoff = e + TIE_WINDOW;
                self.candidates.retain(|(c, _)| *c <= cutoff);
            }
            if e <= self.best + TIE_WINDOW {
                self.candidates.push((e, self.chosen.clone()));
            }
            return;
        }
        // potentials are positive, so partial sums only grow
        if 2.0 * partial > self.best + TIE_WINDOW {
            return;
        }
        let n = self.table.len();
        let need = self.m - self.chosen.len();
        for c in next..=n - need {
            let add: f64 = self.chosen.iter().map(|&p| self.table[p][c]).sum();
            self.chosen.push(c);
            self.extend(c + 1, partial + add);
            self.chosen.pop();
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn shape(n1: usize, n2: usize) -> GridShape {
        GridShape::new(n1, n2).unwrap()
    }

    fn frac(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn gens(s: GridShape, list: &[(usize, usize)]) -> Vec<Generator> {
        list.iter().map(|&(a, b)| Generator::new(s, a, b).unwrap()).collect()
    }

    #[test]
    fn orbit_sizes() {
        let s = shape(10, 10);
        for (g, size) in [((2, 4), 5), ((0, 5), 2), ((1, 2), 10), ((5, 0), 2), ((4, 6), 5)] {
            assert_eq!(orbit_size(s, Generator::new(s, g.0, g.1).unwrap()).unwrap(), size, "{g:?}");
        }
        assert!(matches!(orbit_size(s, Generator { gx: 0, gy: 0 }), Err(Error::ZeroGenerator)));
        assert!(Generator::new(s, 10, 1).is_err());
        assert!(Generator::new(s, 0, 0).is_err());
    }

    #[test]
    fn generator_lists_round_trip() {
        let s = shape(10, 10);
        let list = gens(s, &[(1, 2), (0, 5)]);
        let text = Generator::format_list(&list);
        assert_eq!(text, "1,2;0,5");
        assert_eq!(Generator::parse_list(&text).unwrap(), vec![(1, 2), (0, 5)]);
        assert_eq!(Generator::parse_list(" 3 , 4 ; ").unwrap(), vec![(3, 4)]);
        assert!(Generator::parse_list("3;4").is_err());
        assert!(Generator::parse_list("a,1").is_err());
    }

    #[test]
    fn lattice_examples() {
        let s = shape(4, 4);
        let column = generate_lattice(s, &gens(s, &[(0, 1)])).unwrap();
        assert_eq!(column.points().collect::<Vec<_>>(), (0..4).map(|y| GridPoint::new(0, y)).collect::<Vec<_>>());

        let s = shape(10, 10);
        let l = generate_lattice(s, &gens(s, &[(1, 2), (0, 5)])).unwrap();
        assert_eq!(l.m(), 20);
        assert_eq!(energy(&l), frac(570, 7));

        let s = shape(21, 42);
        assert_eq!(generate_lattice(s, &gens(s, &[(1, 13)])).unwrap().m(), 42);
        assert!(generate_lattice(s, &[]).is_err());
    }

    #[test]
    fn lattice_energy_matches_exact() {
        let s = shape(6, 4);
        for m in [2, 3, 4, 6, 8, 12] {
            let lattices = enumerate_lattices(s, m).unwrap();
            assert!(!lattices.is_empty(), "m={m}");
            for l in &lattices {
                let config = generate_lattice(s, &l.generators).unwrap();
                assert_eq!(config.m(), m);
                assert_eq!(energy(&config), l.energy);
            }
        }
        assert!(enumerate_lattices(s, 5).is_err());
    }

    #[test]
    fn lattices_are_distinct_subgroups() {
        // Z6 x Z6 has 4 subgroups of order 3 and 3 * 4 of order 6
        let s = shape(6, 6);
        assert_eq!(enumerate_lattices(s, 3).unwrap().len(), 4);
        let order6 = enumerate_lattices(s, 6).unwrap();
        assert_eq!(order6.len(), 12);
        let mut sets: Vec<Vec<usize>> = order6.iter().map(|l| subgroup(s, &l.generators)).collect();
        sets.sort();
        sets.dedup();
        assert_eq!(sets.len(), order6.len());
        assert_eq!(enumerate_lattices(s, 1).unwrap().len(), 1);
    }

    #[test]
    fn brute_force_examples() {
        let s = shape(6, 6);
        assert_eq!(brute_force_optimum(s, 1, BRUTE_FORCE_LIMIT).unwrap().1, frac(0, 1));
        assert_eq!(brute_force_optimum(s, 2, BRUTE_FORCE_LIMIT).unwrap().1, frac(1, 3));
        let s = shape(4, 4);
        let (config, e) = brute_force_optimum(s, 8, BRUTE_FORCE_LIMIT).unwrap();
        assert_eq!(config.m(), 8);
        assert_eq!(e, energy(&Configuration::checkerboard(s)));
        let lattice = generate_lattice(s, &gens(s, &[(1, 1), (0, 2)])).unwrap();
        assert_eq!(energy(&lattice), e);
        assert!(matches!(brute_force_optimum(shape(10, 10), 20, BRUTE_FORCE_LIMIT), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn brute_force_matches_naive_enumeration() {
        let s = shape(3, 3);
        for m in 0..=9 {
            let mut best: Option<BigRational> = None;
            for mask in 0u32..(1 << 9) {
                if mask.count_ones() as usize != m {
                    continue;
                }
                let c = Configuration::new(s, (0..9).filter(|i| mask >> i & 1 == 1).map(|i| s.point_at(i))).unwrap();
                let e = energy(&c);
                if best.as_ref().is_none_or(|b| e < *b) {
                    best = Some(e);
                }
            }
            assert_eq!(brute_force_optimum(s, m, BRUTE_FORCE_LIMIT).unwrap().1, best.unwrap(), "m={m}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(36, 2), 630);
        assert_eq!(binomial(100, 50), 100891344545564193334812497256);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(400, 200), u128::MAX);
    }

    #[test]
    fn annealing_basics() {
        let s = shape(6, 6);
        let params = AnnealParams::new(2_000, 7, 2).unwrap();
        assert_eq!(simulated_annealing(s, 1, &params).unwrap().1, frac(0, 1));
        assert_eq!(simulated_annealing(s, 0, &params).unwrap().0.m(), 0);
        assert_eq!(simulated_annealing(s, 36, &params).unwrap().0.m(), 36);
        assert!(simulated_annealing(s, 37, &params).is_err());
        assert!(AnnealParams::new(0, 0, 1).is_err());
        let a = simulated_annealing(s, 10, &params).unwrap();
        let b = simulated_annealing(s, 10, &params).unwrap();
        assert_eq!(a, b);
        assert_eq!(energy(&a.0), a.1);
    }

    #[test]
    fn annealing_finds_small_optimum() {
        let s = shape(4, 4);
        let (_, e) = simulated_annealing(s, 8, &AnnealParams::new(100_000, 1, 5).unwrap()).unwrap();
        let (_, opt) = brute_force_optimum(s, 8, BRUTE_FORCE_LIMIT).unwrap();
        assert!(e >= opt);
        assert_eq!(e, opt, "annealing missed the 4x4 optimum");
    }

    fn contains(entries: &[SweepEntry], n1: usize, n2: usize, m: usize, list: &[(usize, usize)]) -> bool {
        entries.iter().any(|e| {
            let s = e.shape;
            (s.n1(), s.n2(), e.m) == (n1, n2, m)
                && subgroup(s, &e.generators) == subgroup(s, &gens(s, list))
        })
    }

    #[test]
    fn sweep_fixtures() {
        let small = sweep_sharp_cases(4, 4, &SweepOptions::default()).unwrap();
        assert!(contains(&small, 4, 4, 8, &[(1, 1), (0, 2)]));
        assert!(small.iter().all(|e| e.certificate.is_optimal && e.shape.n2() <= e.shape.n1()));
        let six = sweep_sharp_cases(6, 6, &SweepOptions::default()).unwrap();
        assert!(contains(&six, 6, 6, 12, &[(1, 1), (0, 3)]));
        assert!(contains(&six, 6, 6, 18, &[(1, 1), (0, 2)]));
        let entry = six.iter().find(|e| e.m == 18).unwrap();
        let row = entry.csv_row();
        let quoted = format!("\"{}\"", Generator::format_list(&entry.generators));
        assert!(row.starts_with(&format!("6,6,18,{quoted},111/1,")), "{row}");
        assert!(row.ends_with(",1/30,true"), "{row}");
        assert!(sweep_sharp_cases(100, 100, &SweepOptions::default()).is_err());
    }
}
