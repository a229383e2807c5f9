//! Exact optimality certificates: the energy granularity of a grid, the
//! gap test against a certified lower bound, and bound-chain checks.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::conic::{extract_certified_bound, solve, CertifiedBound, ConicSolution, SolveStatus};
use crate::error::{Error, Result};
use crate::reduced::{build_program, ConicForm, ReducedProgram};
use crate::search::{enumerate_lattices, generate_lattice, simulated_annealing, AnnealParams};
use crate::spectra::bdl_bound;
use crate::torus::{energy, lee_distance, Configuration, GridPoint, GridShape};

/// Denominator of the rational a float lower bound is rounded down to.
pub const FLOOR_DENOMINATOR: u64 = 1_000_000_000_000;

/// The smallest positive difference two configuration energies can have:
/// twice the rational gcd of the distinct potential values.
pub fn granularity(shape: GridShape) -> Result<BigRational> {
    if shape.n() < 2 {
        return Err(Error::Unsupported(format!("granularity needs at least two cells, got {shape}")));
    }
    let mut present = vec![false; shape.max_distance() + 1];
    for p in shape.points() {
        present[lee_distance(shape, GridPoint::ORIGIN, p)] = true;
    }
    let mut g = BigRational::zero();
    for (d, _) in present.iter().enumerate().skip(1).filter(|(_, &on)| on) {
        g = rational_gcd(&g, &BigRational::new(BigInt::from(1), BigInt::from(d)));
    }
    Ok(g * BigInt::from(2))
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    BigRational::new(num, a.denom() * b.denom())
}

/// `floor(value * 10^12) / 10^12`, exactly. Non-finite values map to
/// `None`.
pub fn floor_rational(value: f64) -> Option<BigRational> {
    let exact = BigRational::from_float(value)?;
    let scale = BigInt::from(FLOOR_DENOMINATOR);
    Some(BigRational::new((exact * &scale).floor().to_integer(), scale))
}

/// A certified lower bound tied to the instance it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub shape: GridShape,
    pub m: usize,
    pub bound: CertifiedBound,
}

/// Solves the reduced program of `(shape, m)` and extracts its certified
/// bound. The solution is returned for diagnostics.
pub fn sdp_lower_bound(shape: GridShape, m: usize, form: ConicForm, tol: f64, max_iter: usize) -> Result<(LowerBound, ConicSolution)> {
    program_lower_bound(&build_program(shape, m)?, form, tol, max_iter)
}

/// As [`sdp_lower_bound`] for an already built (possibly folded) program.
pub fn program_lower_bound(program: &ReducedProgram, form: ConicForm, tol: f64, max_iter: usize) -> Result<(LowerBound, ConicSolution)> {
    let conic = program.to_conic_form(form);
    let solution = solve(&conic, tol, max_iter)?;
    let bound = extract_certified_bound(&conic, &solution);
    Ok((LowerBound { shape: program.shape(), m: program.m(), bound }, solution))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub shape: GridShape,
    pub m: usize,
    pub upper_config: Configuration,
    pub upper_energy: BigRational,
    pub lower_bound: f64,
    pub r: BigRational,
    pub gap: f64,
    pub is_optimal: bool,
}

/// Declares `config` optimal when its exact energy exceeds the rounded-down
/// lower bound by less than the granularity.
pub fn certify_optimal(config: &Configuration, lower: &LowerBound) -> Result<Certificate> {
    let shape = config.shape();
    if shape != lower.shape || config.m() != lower.m {
        return Err(Error::Mismatch(format!(
            "configuration is {shape} with m={}, bound is for {} with m={}",
            config.m(),
            lower.shape,
            lower.m
        )));
    }
    let upper_energy = energy(config);
    let r = granularity(shape)?;
    let value = lower.bound.value;
    let is_optimal = match floor_rational(value) {
        Some(floor) => &upper_energy - floor < r,
        None => false,
    };
    let gap = upper_energy.to_f64().unwrap_or(f64::NAN) - value;
    Ok(Certificate { shape, m: config.m(), upper_config: config.clone(), upper_energy, lower_bound: value, r, gap, is_optimal })
}

fn ratio(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

impl Certificate {
    pub const CSV_HEADER: &'static str = "n1,n2,m,upper_energy,upper_energy_f64,lower_bound,r,gap,verdict";

    pub fn verdict(&self) -> &'static str {
        if self.is_optimal {
            "optimal"
        } else {
            "not_proven"
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.9},{:.9},{},{:.3e},{}",
            self.shape.n1(),
            self.shape.n2(),
            self.m,
            ratio(&self.upper_energy),
            self.upper_energy.to_f64().unwrap_or(f64::NAN),
            self.lower_bound,
            ratio(&self.r),
            self.gap,
            self.verdict()
        )
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shape        {}", self.shape)?;
        writeln!(f, "m            {}", self.m)?;
        writeln!(f, "upper        {} ({:.9})", ratio(&self.upper_energy), self.upper_energy.to_f64().unwrap_or(f64::NAN))?;
        writeln!(f, "lower        {:.9}", self.lower_bound)?;
        writeln!(f, "r            {}", ratio(&self.r))?;
        writeln!(f, "gap          {:.3e}", self.gap)?;
        write!(f, "verdict      {}", self.verdict())
    }
}

/// Settings for [`bound_chain_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOptions {
    pub anneal: AnnealParams,
    pub form: ConicForm,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            anneal: AnnealParams { iterations: 200_000, seed: 0, restarts: 4 },
            form: ConicForm::Face,
            tol: crate::conic::DEFAULT_TOL,
            max_iter: crate::conic::DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub shape: GridShape,
    pub m: usize,
    pub bdl: f64,
    pub sdp: f64,
    pub sdp_status: SolveStatus,
    pub upper: BigRational,
    pub upper_config: Configuration,
    /// `bdl <= sdp + 1e-6 (1 + |sdp|)`.
    pub eigen_below_sdp: bool,
    /// `sdp <= upper + 1e-9`.
    pub sdp_below_upper: bool,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.eigen_below_sdp && self.sdp_below_upper
    }
}

/// The best configuration known without enumeration: annealing, and the
/// lowest-energy lattice when `m` divides `n`.
pub fn best_known(shape: GridShape, m: usize, anneal: &AnnealParams) -> Result<(Configuration, BigRational)> {
    let (mut config, mut e) = simulated_annealing(shape, m, anneal)?;
    if m >= 2 && m < shape.n() && shape.n() % m == 0 {
        if let Some(best) = enumerate_lattices(shape, m)?.into_iter().min_by(|a, b| a.energy.cmp(&b.energy)) {
            if best.energy < e {
                config = generate_lattice(shape, &best.generators)?;
                e = best.energy;
            }
        }
    }
    Ok((config, e))
}

/// Eigenvalue bound, certified conic bound and best-known energy, with
/// the ordering between them checked. A broken ordering is reported, not
/// raised.
pub fn bound_chain_check(shape: GridShape, m: usize, options: &ChainOptions) -> Result<ChainReport> {
    let bdl = bdl_bound(shape, m)?;
    let (lower, solution) = sdp_lower_bound(shape, m, options.form, options.tol, options.max_iter)?;
    let (upper_config, upper) = best_known(shape, m, &options.anneal)?;
    let sdp = lower.bound.value;
    let upper_f = upper.to_f64().unwrap_or(f64::NAN);
    Ok(ChainReport {
        shape,
        m,
        bdl,
        sdp,
        sdp_status: solution.status,
        eigen_below_sdp: bdl <= sdp + 1e-6 * (1.0 + sdp.abs()),
        sdp_below_upper: sdp <= upper_f + 1e-9,
        upper,
        upper_config,
    })
}
