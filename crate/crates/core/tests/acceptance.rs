//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::certify::{best_known, certify_optimal, granularity, sdp_lower_bound, LowerBound};
use toric_core::conic::{ConicSolution, DEFAULT_MAX_ITER, DEFAULT_TOL};
use toric_core::jordan::{expand_to_dense, jnm_square, phi, JnmElement};
use toric_core::reduced::{build_program, embed_configuration, subspace_dims, ConicForm};
use toric_core::search::{
    brute_force_optimum, generate_lattice, simulated_annealing, sweep_sharp_cases, AnnealParams, Generator,
    SweepOptions, BRUTE_FORCE_LIMIT,
};
use toric_core::spectra::{bdl_bound, projected_eigenvalue_bound};
use toric_core::torus::{build_dense_qap, energy, Configuration, GridOrdering, GridShape};

/// `(m, eigenvalue bound, conic bound, best upper bound, sharp)`.
type Row = (usize, f64, f64, f64, bool);

const SIX: &[Row] = &[
    (1, -1.514815, 0.000000, 0.000000, true),
    (2, -2.125926, 0.333319, 0.333333, true),
    (3, -1.833333, 1.349939, 1.500000, false),
    (4, -0.637037, 2.999892, 3.000000, true),
    (5, 1.462963, 5.416640, 5.666667, false),
    (6, 4.466667, 8.599983, 8.666667, false),
    (7, 8.374074, 12.622685, 13.000000, false),
    (8, 13.185185, 17.407305, 17.600000, false),
    (9, 18.900000, 22.937178, 23.466667, false),
    (10, 25.518519, 29.212957, 29.666667, false),
    (11, 33.040741, 36.233780, 36.666667, false),
    (12, 41.466667, 44.000000, 44.000000, true),
    (13, 50.796296, 53.065277, 54.366667, false),
    (14, 61.029630, 62.959998, 64.666667, false),
    (15, 72.166667, 73.687450, 75.500000, false),
    (16, 84.207407, 85.273263, 86.666667, false),
    (17, 97.151852, 97.718432, 98.666667, false),
    (18, 111.000000, 111.000000, 111.000000, true),
];

const SEVEN: &[Row] = &[
    (1, -1.535637, 0.000000, 0.000000, true),
    (2, -2.287844, 0.333330, 0.333333, true),
    (3, -2.256623, 1.243763, 1.300000, false),
    (4, -1.441972, 2.723982, 2.800000, false),
    (5, 0.156109, 4.784851, 4.866667, false),
    (6, 2.537619, 7.533726, 7.800000, false),
    (7, 5.702558, 10.916369, 10.966667, false),
    (8, 9.650926, 15.043550, 15.500000, false),
    (9, 14.382724, 19.814560, 20.366667, false),
    (10, 19.897950, 25.325560, 25.900000, false),
    (11, 26.196607, 31.554779, 32.166667, false),
    (12, 33.278692, 38.455887, 39.033333, false),
    (13, 41.144207, 46.029212, 46.733333, false),
    (14, 49.793151, 54.274568, 54.933333, false),
    (15, 59.225525, 63.260772, 64.433333, false),
    (16, 69.441328, 73.172931, 74.100000, false),
    (17, 80.440560, 83.797024, 85.200000, false),
    (18, 92.223221, 95.162225, 96.600000, false),
    (19, 104.789312, 107.298752, 109.033333, false),
    (20, 118.138832, 120.154716, 122.000000, false),
    (21, 132.271782, 133.732016, 134.866667, false),
    (22, 147.188160, 148.029982, 150.066667, false),
    (23, 162.887969, 163.048746, 165.700000, false),
    (24, 179.371206, 179.371185, 182.266667, false),
];

const EIGHT: &[Row] = &[
    (1, -1.670238, 0.000000, 0.000000, true),
    (2, -2.654762, 0.249994, 0.250000, true),
    (3, -2.953571, 1.014038, 1.133333, false),
    (4, -2.566667, 2.266433, 2.266667, true),
    (5, -1.494048, 4.062460, 4.233333, false),
    (6, 0.264286, 6.435304, 6.583333, false),
    (7, 2.708333, 9.423375, 9.666667, false),
    (8, 5.838095, 12.965443, 13.000000, false),
    (9, 9.653571, 17.078833, 17.442857, false),
    (10, 14.154762, 21.749475, 22.126190, false),
    (11, 19.341667, 26.990007, 27.628571, false),
    (12, 25.214286, 32.848535, 33.666667, false),
    (13, 31.772619, 39.445606, 40.352381, false),
    (14, 39.016667, 46.636662, 47.350000, false),
    (15, 46.946429, 54.421402, 54.950000, false),
    (16, 55.561905, 62.799758, 63.076190, false),
    (17, 64.863095, 71.971752, 72.921429, false),
    (18, 74.850000, 81.768179, 83.023810, false),
    (19, 85.522619, 92.238774, 93.535714, false),
    (20, 96.880952, 103.368587, 104.300000, false),
    (21, 108.925000, 115.126506, 116.114286, false),
    (22, 121.654762, 127.522322, 128.483333, false),
    (23, 135.070238, 140.541217, 141.719048, false),
    (24, 149.171429, 154.193846, 155.514286, false),
    (25, 163.958333, 168.487184, 170.390476, false),
    (26, 179.430952, 183.448522, 185.711905, false),
    (27, 195.589286, 199.055388, 201.416667, false),
    (28, 212.433333, 215.278915, 217.333333, false),
    (29, 229.963095, 232.135382, 234.083333, false),
    (30, 248.178571, 249.661718, 251.083333, false),
    (31, 267.079762, 267.846258, 268.750000, false),
    (32, 286.666667, 286.666665, 286.666667, true),
];

const TEN: &[Row] = &[
    (1, -1.716889, 0.000000, 0.000000, true),
    (2, -2.883429, 0.199988, 0.200000, true),
    (3, -3.499619, 0.811542, 0.904762, false),
    (4, -3.565460, 1.807631, 1.809524, true),
    (5, -3.080952, 3.233819, 3.333333, false),
    (6, -2.046095, 5.131049, 5.233333, false),
    (7, -0.460889, 7.479826, 7.700000, false),
    (8, 1.674667, 10.307204, 10.355556, false),
    (9, 4.360571, 13.579004, 13.800000, false),
    (10, 7.596825, 17.298929, 17.433333, false),
    (11, 11.383429, 21.467188, 21.876190, false),
    (12, 15.720381, 26.234485, 26.679365, false),
    (13, 20.607683, 31.472262, 32.029365, false),
    (14, 26.045333, 37.183990, 37.744444, false),
    (15, 32.033333, 43.378553, 44.096825, false),
    (16, 38.571683, 50.037058, 50.736508, false),
    (17, 45.660381, 57.183049, 57.922222, false),
    (18, 53.299429, 64.786226, 65.342857, false),
    (19, 61.488825, 72.867194, 73.285714, false),
    (20, 70.228571, 81.428359, 81.428571, true),
    (21, 79.518667, 90.810097, 91.739683, false),
    (22, 89.359111, 100.699416, 102.068254, false),
    (23, 99.749905, 111.093201, 112.648413, false),
    (24, 110.691048, 121.990693, 123.492857, false),
    (25, 122.182540, 133.400133, 134.938889, false),
    (26, 134.224381, 145.304277, 146.824603, false),
    (27, 146.816571, 157.729721, 159.401587, false),
    (28, 159.959111, 170.652552, 172.295238, false),
    (29, 173.652000, 184.080092, 185.607937, false),
    (30, 187.895238, 198.017798, 199.388095, false),
    (31, 202.688825, 212.458779, 214.014286, false),
    (32, 218.032762, 227.417991, 228.861111, false),
    (33, 233.927048, 242.967654, 244.254762, false),
    (34, 250.371683, 259.050406, 260.466667, false),
    (35, 267.366667, 275.649622, 277.788889, false),
    (36, 284.912000, 292.759839, 295.125397, false),
    (37, 303.007683, 310.386054, 312.823810, false),
    (38, 321.653714, 328.520878, 331.160317, false),
    (39, 340.850095, 347.242354, 349.413492, false),
    (40, 360.596825, 366.466726, 368.701587, false),
    (41, 380.893905, 386.186323, 389.195238, false),
    (42, 401.741333, 406.463567, 410.162698, false),
    (43, 423.139111, 427.236004, 431.381746, false),
    (44, 445.087238, 448.524441, 452.888889, false),
    (45, 467.585714, 470.378907, 474.000000, false),
    (46, 490.634540, 492.906204, 496.033333, false),
    (47, 514.233714, 515.926534, 518.650000, false),
    (48, 538.383238, 539.531651, 541.466667, false),
    (49, 563.083111, 563.667331, 564.800000, false),
    (50, 588.333333, 588.332003, 588.333333, true),
];

const TABLES: [(usize, &[Row]); 4] = [(6, SIX), (7, SEVEN), (8, EIGHT), (10, TEN)];

/// `(n1, n2, dim S, dim S0)`.
const DIMENSIONS: &[(usize, usize, usize, usize)] = &[
    (4, 4, 30, 17),
    (5, 5, 30, 17),
    (6, 6, 50, 29),
    (8, 8, 75, 44),
    (10, 10, 105, 62),
    (12, 12, 140, 83),
    (24, 24, 455, 272),
    (100, 100, 6630, 3977),
    (1000, 1000, 628755, 377252),
    (6, 5, 60, 35),
    (10, 5, 90, 53),
    (24, 12, 455, 272),
];

/// Sharp lattice cases up to 10x10: `(n1, n2, m, generators)`.
const APPENDIX: &[(usize, usize, usize, &[(usize, usize)])] = &[
    (2, 2, 2, &[(1, 1)]),
    (3, 3, 3, &[(1, 1)]),
    (4, 1, 2, &[(2, 0)]),
    (4, 2, 2, &[(2, 1)]),
    (4, 2, 4, &[(1, 1)]),
    (4, 4, 2, &[(2, 2)]),
    (4, 4, 8, &[(1, 1), (0, 2)]),
    (5, 5, 5, &[(1, 2)]),
    (6, 1, 2, &[(3, 0)]),
    (6, 1, 3, &[(2, 0)]),
    (6, 2, 2, &[(3, 1)]),
    (6, 2, 6, &[(1, 1)]),
    (6, 3, 3, &[(2, 1)]),
    (6, 3, 6, &[(1, 1)]),
    (6, 4, 2, &[(3, 2)]),
    (6, 4, 12, &[(1, 1)]),
    (6, 6, 2, &[(3, 3)]),
    (6, 6, 12, &[(1, 1), (0, 3)]),
    (6, 6, 18, &[(1, 1), (0, 2)]),
    (8, 1, 2, &[(4, 0)]),
    (8, 1, 4, &[(2, 0)]),
    (8, 2, 2, &[(4, 1)]),
    (8, 2, 4, &[(2, 1)]),
    (8, 2, 8, &[(1, 1)]),
    (8, 4, 2, &[(4, 2)]),
    (8, 4, 4, &[(2, 2)]),
    (8, 4, 16, &[(1, 1), (0, 2)]),
    (8, 6, 2, &[(4, 3)]),
    (8, 6, 24, &[(1, 1)]),
    (8, 8, 2, &[(4, 4)]),
    (8, 8, 32, &[(1, 1), (0, 2)]),
    (9, 1, 3, &[(3, 0)]),
    (9, 3, 3, &[(3, 1)]),
    (9, 3, 9, &[(1, 1)]),
    (9, 6, 18, &[(1, 1)]),
    (9, 9, 27, &[(1, 1), (0, 3)]),
    (10, 1, 2, &[(5, 0)]),
    (10, 1, 5, &[(2, 0)]),
    (10, 2, 2, &[(5, 1)]),
    (10, 2, 10, &[(1, 1)]),
    (10, 4, 2, &[(5, 2)]),
    (10, 4, 20, &[(1, 1)]),
    (10, 5, 10, &[(1, 2)]),
    (10, 6, 2, &[(5, 3)]),
    (10, 6, 30, &[(1, 1)]),
    (10, 8, 2, &[(5, 4)]),
    (10, 8, 40, &[(1, 1)]),
    (10, 10, 2, &[(5, 5)]),
    (10, 10, 20, &[(1, 2), (0, 5)]),
    (10, 10, 50, &[(1, 1), (0, 2)]),
];

const ANNEAL_ITERATIONS: u64 = 1_000_000;
const ANNEAL_RESTARTS: usize = 5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn shape(n1: usize, n2: usize) -> GridShape {
    GridShape::new(n1, n2).unwrap()
}

fn frac(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn solve_face(s: GridShape, m: usize) -> (LowerBound, ConicSolution) {
    sdp_lower_bound(s, m, ConicForm::Face, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
}

/// Conic solutions for every row of the four tables, in table order.
struct Solved {
    rows: Vec<(usize, Row, LowerBound, ConicSolution)>,
    elapsed: Duration,
}

fn solve_tables() -> Solved {
    let start = Instant::now();
    let mut rows = Vec::new();
    for (side, table) in TABLES {
        for &row in table {
            let (bound, sol) = solve_face(shape(side, side), row.0);
            rows.push((side, row, bound, sol));
        }
    }
    Solved { rows, elapsed: start.elapsed() }
}

fn eigenvalue_regression() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, 0, 0);
    for (side, table) in TABLES {
        for &(m, pb, ..) in table {
            let err = (bdl_bound(shape(side, side), m).unwrap() - pb).abs();
            if err > worst.0 {
                worst = (err, side, m);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst.0 <= 1e-5 && elapsed < Duration::from_secs(5),
        format!("max deviation {:.2e} ({}x{} m={}), {:.2?}", worst.0, worst.1, worst.1, worst.2, elapsed),
    )
}

fn conic_regression(solved: &Solved) -> Outcome {
    let mut misses = Vec::new();
    let mut worst = 0.0f64;
    for (side, (m, _, sdp, ..), _, sol) in &solved.rows {
        let err = (sol.primal_obj - sdp).abs();
        worst = worst.max(err);
        if err > 1e-4 {
            misses.push(format!("{side}x{side} m={m}: {:.6} vs {sdp:.6}", sol.primal_obj));
        }
    }
    let shown: Vec<_> = misses.iter().take(4).cloned().collect();
    outcome(
        misses.is_empty(),
        format!(
            "{}/{} rows within 1e-4, max deviation {worst:.2e}, {:.2?}{}{}",
            solved.rows.len() - misses.len(),
            solved.rows.len(),
            solved.elapsed,
            if shown.is_empty() { "" } else { "; e.g. " },
            shown.join("; ")
        ),
    )
}

fn certification_regression(solved: &Solved) -> Outcome {
    let anneal = AnnealParams::new(ANNEAL_ITERATIONS, 0, ANNEAL_RESTARTS).unwrap();
    let mut wrong = Vec::new();
    let mut sharp = 0;
    for (side, (m, .., bold), bound, _) in &solved.rows {
        let (config, _) = best_known(shape(*side, *side), *m, &anneal).unwrap();
        let cert = certify_optimal(&config, bound).unwrap();
        sharp += cert.is_optimal as usize;
        if cert.is_optimal != *bold {
            wrong.push(format!("{side}x{side} m={m} certified={} gap={:.2e}", cert.is_optimal, cert.gap));
        }
    }
    outcome(wrong.is_empty(), format!("{sharp} sharp rows; mismatches: [{}]", wrong.join("; ")))
}

fn oracle_soundness() -> Outcome {
    let cases: &[(usize, usize, usize)] = &[(2, 2, 4), (4, 2, 8), (3, 3, 9), (4, 4, 16), (5, 5, 6), (6, 6, 5)];
    let mut checked = 0;
    let mut broken = Vec::new();
    for &(n1, n2, m_max) in cases {
        let s = shape(n1, n2);
        for m in 0..=m_max {
            let Ok((_, opt)) = brute_force_optimum(s, m, BRUTE_FORCE_LIMIT) else { continue };
            let (bound, _) = solve_face(s, m);
            let sdp = bound.bound.value;
            let pb = bdl_bound(s, m).unwrap();
            let exact_ok = BigRational::from_float(sdp).is_some_and(|v| v <= opt);
            let chain_ok = pb <= sdp + 1e-6 * (1.0 + sdp.abs());
            checked += 1;
            if !exact_ok || !chain_ok {
                broken.push(format!("{n1}x{n2} m={m}: pb {pb:.6} sdp {sdp:.6} opt {:.6}", opt.to_f64().unwrap()));
            }
        }
    }
    outcome(broken.is_empty(), format!("{checked} instances; violations: [{}]", broken.join("; ")))
}

fn embedding_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    let mut worst_eig = f64::INFINITY;
    for _ in 0..500 {
        let s = shape(rng.random_range(1..=10), rng.random_range(1..=10));
        let m = rng.random_range(0..=s.n());
        let cells = rand::seq::index::sample(&mut rng, s.n(), m);
        let config = Configuration::new(s, cells.into_iter().map(|i| s.point_at(i))).unwrap();
        let program = build_program(s, m).unwrap();
        let point = embed_configuration(&program, &config).unwrap();
        let report = program.check_point(&point.to_vector()).unwrap();
        worst_eig = worst_eig.min(report.min_block_eigenvalue);
        let ok = point.equality_sum_exact() == frac(s.n() as i64 - 1, 1)
            && report.min_block_eigenvalue >= -1e-10
            && point.objective_exact(&program) == energy(&config);
        if !ok {
            bad.push(format!("{s} m={m}"));
        }
    }
    outcome(bad.is_empty(), format!("500 configurations, min block eigenvalue {worst_eig:.2e}; failures: [{}]", bad.join("; ")))
}

fn projected_bound_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    for n1 in 1..=100usize {
        for n2 in 1..=100 / n1 {
            let s = shape(n1, n2);
            for _ in 0..5 {
                let m = rng.random_range(0..=s.n());
                let bdl = bdl_bound(s, m).unwrap();
                let qap = build_dense_qap(s, m, &GridOrdering::row_major(s)).unwrap();
                let pb = projected_eigenvalue_bound(&qap).unwrap();
                let rel = (pb - bdl).abs() / (1.0 + bdl.abs());
                count += 1;
                if rel > worst.0 {
                    worst = (rel, format!("{s} m={m}"));
                }
            }
        }
    }
    outcome(
        worst.0 <= 1e-7,
        format!("{count} instances, max relative deviation {:.2e} ({}), {:.2?}", worst.0, worst.1, start.elapsed()),
    )
}

fn jordan_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut hom, mut dense) = (0.0f64, 0.0f64);
    let mut failures = 0;
    for _ in 0..1000 {
        let n = rng.random_range(4..=20usize);
        let m = rng.random_range(2..=n - 2);
        let coeffs: [f64; 5] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let x = JnmElement::new(n, m, coeffs).unwrap();
        let h = phi(&jnm_square(&x)).max_abs_diff(&phi(&x).square());
        hom = hom.max(h);
        let mut ok = h <= 1e-10 * (1.0 + x.max_abs().powi(2));
        if n <= 12 {
            let d = expand_to_dense(&x).unwrap();
            let diff = d.matmul(&d).unwrap().sub(&expand_to_dense(&jnm_square(&x)).unwrap()).max_abs();
            dense = dense.max(diff);
            ok &= diff <= 1e-10;
        }
        failures += !ok as usize;
    }
    outcome(failures == 0, format!("1000 elements, homomorphism error {hom:.2e}, dense error {dense:.2e}, {failures} failures"))
}

fn dimension_formulas() -> Outcome {
    let wrong: Vec<String> = DIMENSIONS
        .iter()
        .filter_map(|&(n1, n2, s, s0)| {
            let got = subspace_dims(n1, n2).unwrap();
            (got != (s, s0)).then(|| format!("({n1},{n2}) -> {got:?}, expected ({s}, {s0})"))
        })
        .collect();
    outcome(wrong.is_empty(), format!("{} rows; mismatches: [{}]", DIMENSIONS.len(), wrong.join("; ")))
}

fn granularity_values() -> Outcome {
    let expected = [(6, frac(1, 30)), (7, frac(1, 210)), (8, frac(1, 420)), (10, frac(1, 1260))];
    let mut wrong = Vec::new();
    for (side, r) in expected {
        let got = granularity(shape(side, side)).unwrap();
        if got != r {
            wrong.push(format!("{side}x{side}: {got}, expected {r}"));
        }
    }
    outcome(wrong.is_empty(), format!("mismatches: [{}]", wrong.join("; ")))
}

fn sweep_fixture() -> Outcome {
    let start = Instant::now();
    let entries = sweep_sharp_cases(10, 10, &SweepOptions::default()).unwrap();
    let mut missing = Vec::new();
    for &(n1, n2, m, gens) in APPENDIX {
        let s = shape(n1, n2);
        let generators: Vec<Generator> = gens.iter().map(|&(a, b)| Generator::new(s, a, b).unwrap()).collect();
        let lattice = generate_lattice(s, &generators).unwrap();
        let found = entries.iter().find(|e| e.shape == s && e.m == m);
        let ok = match found {
            Some(e) => {
                let same_group = generate_lattice(s, &e.generators).unwrap() == lattice;
                let required = (n1, n2, m) != (10, 10, 20) || same_group;
                e.certificate.is_optimal && lattice.m() == m && energy(&lattice) == e.certificate.upper_energy && required
            }
            None => false,
        };
        if !ok {
            missing.push(format!("({n1},{n2},{m})"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        missing.is_empty() && elapsed < Duration::from_secs(600),
        format!(
            "{} certified entries, {}/{} appendix rows reproduced, {:.2?}; missing: [{}]",
            entries.len(),
            APPENDIX.len() - missing.len(),
            APPENDIX.len(),
            elapsed,
            missing.join(", ")
        ),
    )
}

fn annealing_sanity() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (side, m) in [(6, 18), (8, 32), (10, 50)] {
        let s = shape(side, side);
        let (bound, _) = solve_face(s, m);
        let attains = |seed: u64| {
            let params = AnnealParams::new(ANNEAL_ITERATIONS, seed, ANNEAL_RESTARTS).unwrap();
            let (config, _) = simulated_annealing(s, m, &params).unwrap();
            certify_optimal(&config, &bound).unwrap().is_optimal
        };
        if attains(0) {
            notes.push(format!("{side}x{side} m={m}: seed 0"));
        } else if let Some(seed) = (1..=5).find(|&seed| attains(seed)) {
            notes.push(format!("{side}x{side} m={m}: rerun seed {seed}"));
        } else {
            pass = false;
            notes.push(format!("{side}x{side} m={m}: missed"));
        }
    }
    outcome(pass, notes.join("; "))
}

fn run(index: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
    });
    println!("criterion {index:>2} {}: {title}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
    result.pass
}

fn main() {
    let solved = solve_tables();
    let results = [
        run(1, "eigenvalue bound regression", eigenvalue_regression),
        run(2, "conic bound regression", || conic_regression(&solved)),
        run(3, "certification regression", || certification_regression(&solved)),
        run(4, "oracle soundness", oracle_soundness),
        run(5, "embedding identity", embedding_identity),
        run(6, "projected bound identity", projected_bound_identity),
        run(7, "jordan suite", jordan_suite),
        run(8, "dimension formulas", dimension_formulas),
        run(9, "granularity", granularity_values),
        run(10, "sweep fixture", sweep_fixture),
        run(11, "annealing sanity", annealing_sanity),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
