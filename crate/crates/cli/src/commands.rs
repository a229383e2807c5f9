use std::fs;
use std::path::Path;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use toric_core::certify::{best_known, certify_optimal, program_lower_bound, LowerBound};
use toric_core::conic::{extract_certified_bound, format as conic_format, solve, ConicSolution, SolveStatus};
use toric_core::reduced::{build_program, fold_square, subspace_dims, ReducedProgram};
use toric_core::search::{generate_lattice, simulated_annealing, sweep_sharp_cases, AnnealParams, Generator, SweepEntry, SweepOptions};
use toric_core::spectra::bdl_bound;
use toric_core::torus::{energy, row_sum, Configuration, GridShape};
use toric_core::{BigRational, Error};

use crate::args::*;
use crate::render;

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input files.
    Usage(String),
    /// The computation ran but did not complete.
    Solver(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Solver(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => Failure::Solver(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Solver(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_format(format: Format, allowed: &[Format]) -> Outcome {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage(format!("format {format:?} is not available here; use one of {allowed:?}").to_lowercase()))
    }
}

fn grid(n1: usize, n2: usize) -> Result<GridShape, Failure> {
    Ok(GridShape::new(n1, n2)?)
}

fn check_count(shape: GridShape, m: usize) -> Outcome {
    if m > shape.n() {
        return Err(Error::InvalidParticleCount { m, n: shape.n() }.into());
    }
    Ok(())
}

fn anneal_params(a: &AnnealArgs) -> Result<AnnealParams, Failure> {
    Ok(AnnealParams::new(a.iters, a.seed, a.restarts)?)
}

fn read_config(path: &Path) -> Result<Configuration, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Configuration::from_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn build(shape: GridShape, m: usize, fold: bool) -> Result<ReducedProgram, Failure> {
    let program = build_program(shape, m)?;
    if fold && shape.is_square() {
        Ok(fold_square(&program)?)
    } else {
        Ok(program)
    }
}

fn lower_bound(shape: GridShape, m: usize, s: &SolverArgs) -> Result<(LowerBound, ConicSolution), Failure> {
    if !(s.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    Ok(program_lower_bound(&build(shape, m, s.fold_square)?, s.form.into(), s.tol, s.max_iter)?)
}

/// A grid with fewer than two cells has a single configuration per m.
fn certify_row(config: &Configuration, bound: &LowerBound) -> Result<bool, Failure> {
    if config.shape().n() < 2 {
        return Ok(true);
    }
    Ok(certify_optimal(config, bound)?.is_optimal)
}

struct Row {
    m: usize,
    pb: Option<f64>,
    sdp: Option<(f64, SolveStatus)>,
    ub: Option<BigRational>,
    sharp: Option<bool>,
}

fn compute_row(shape: GridShape, m: usize, method: Method, solver: &SolverArgs, anneal: &AnnealParams) -> Result<Row, Failure> {
    let pb = matches!(method, Method::Eigen | Method::All).then(|| bdl_bound(shape, m)).transpose()?;
    let solved = matches!(method, Method::Sdp | Method::All).then(|| lower_bound(shape, m, solver)).transpose()?;
    let (mut ub, mut sharp) = (None, None);
    if method == Method::All {
        let (config, e) = best_known(shape, m, anneal)?;
        if let Some((bound, _)) = &solved {
            sharp = Some(certify_row(&config, bound)?);
        }
        ub = Some(e);
    }
    Ok(Row { m, pb, sdp: solved.map(|(_, sol)| (sol.primal_obj, sol.status)), ub, sharp })
}

fn compute_rows(shape: GridShape, ms: Vec<usize>, method: Method, solver: &SolverArgs, anneal: &AnnealArgs) -> Result<Vec<Row>, Failure> {
    let params = anneal_params(anneal)?;
    ms.into_par_iter().map(|m| compute_row(shape, m, method, solver, &params)).collect()
}

fn unconverged(rows: &[Row]) -> Outcome {
    let bad: Vec<String> = rows
        .iter()
        .filter_map(|r| r.sdp.filter(|(_, st)| *st != SolveStatus::Optimal).map(|(_, st)| format!("m={} ({st})", r.m)))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Solver(format!("solver did not converge for {}", bad.join(", "))))
    }
}

fn write_rows(rows: &[Row], format: Format, with_sharp: bool) -> Result<String, Failure> {
    let first = rows.first();
    let has_pb = first.is_some_and(|r| r.pb.is_some());
    let has_sdp = first.is_some_and(|r| r.sdp.is_some());
    let has_ub = first.is_some_and(|r| r.ub.is_some());
    let has_sharp = with_sharp && first.is_some_and(|r| r.sharp.is_some());
    let cells = |r: &Row| -> Vec<String> {
        let mut v = vec![r.m.to_string()];
        if let Some(pb) = r.pb {
            v.push(format!("{pb:.6}"));
        }
        if let Some((sdp, _)) = r.sdp {
            v.push(format!("{sdp:.6}"));
        }
        if let Some(ub) = &r.ub {
            v.push(ub.to_string());
            if format != Format::Plain {
                v.push(format!("{:.6}", ub.to_f64().unwrap_or(f64::NAN)));
            }
        }
        v
    };
    match format {
        Format::Plain => {
            let mut out = String::new();
            for r in rows {
                let mut v = cells(r);
                if has_sharp && r.sharp == Some(true) {
                    v.push("*".into());
                }
                out.push_str(&v.join(", "));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut header = vec!["m"];
            if has_pb {
                header.push("pb");
            }
            if has_sdp {
                header.push("sdp");
            }
            if has_ub {
                header.extend(["ub_exact", "ub"]);
            }
            if has_sharp {
                header.push("certified");
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Failure::Solver(e.to_string());
            w.write_record(&header).map_err(csv_err)?;
            for r in rows {
                let mut v = cells(r);
                if has_sharp {
                    v.push(r.sharp.unwrap_or(false).to_string());
                }
                w.write_record(&v).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Solver(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Md => {
            let mut header = vec!["m"];
            if has_pb {
                header.push("PB");
            }
            if has_sdp {
                header.push("SDP");
            }
            if has_ub {
                header.extend(["UB (exact)", "UB"]);
            }
            let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---:|".repeat(header.len()));
            for r in rows {
                let bold = has_sharp && r.sharp == Some(true);
                let v: Vec<String> = cells(r).into_iter().map(|c| if bold { format!("**{c}**") } else { c }).collect();
                out.push_str(&format!("| {} |\n", v.join(" | ")));
            }
            Ok(out)
        }
        _ => Err(usage("bound tables support csv, md and plain")),
    }
}

pub fn bound(a: &BoundArgs) -> Outcome {
    check_format(a.format, &[Format::Csv, Format::Md, Format::Plain])?;
    let shape = grid(a.shape.n1, a.shape.n2)?;
    let ms: Vec<usize> = match (a.m, a.m_from, a.m_to) {
        (Some(m), _, _) => vec![m],
        (None, Some(lo), Some(hi)) if lo <= hi => (lo..=hi).collect(),
        (None, Some(lo), Some(hi)) => return Err(usage(format!("--m-from {lo} exceeds --m-to {hi}"))),
        _ => return Err(usage("give --m or --m-from and --m-to")),
    };
    for &m in &ms {
        check_count(shape, m)?;
    }
    let rows = compute_rows(shape, ms, a.method, &a.solver, &a.anneal)?;
    emit(a.out.as_deref(), &write_rows(&rows, a.format, false)?)?;
    unconverged(&rows)
}

pub fn table(a: &TableArgs) -> Outcome {
    check_format(a.format, &[Format::Csv, Format::Md, Format::Plain])?;
    let shape = grid(a.shape.n1, a.shape.n2)?;
    let ms: Vec<usize> = (1..=shape.n() / 2).collect();
    let rows = compute_rows(shape, ms, a.method, &a.solver, &a.anneal)?;
    let mut text = write_rows(&rows, a.format, true)?;
    if a.format != Format::Csv {
        let c = row_sum(shape);
        let marker = if a.format == Format::Md { "Bold rows" } else { "Rows marked *" };
        let note = format!(
            "\nOnly m <= n/2 is listed: an optimum for n - m is the complement of an optimum for m, with energy larger by c(n - 2m), c = {c}.{}\n",
            if a.method == Method::All { format!(" {marker} are proven optimal.") } else { String::new() }
        );
        text.push_str(&note);
    }
    emit(a.out.as_deref(), &text)?;
    unconverged(&rows)
}

pub fn anneal(a: &AnnealCmd) -> Outcome {
    check_format(a.format, &[Format::Plain, Format::Csv, Format::Ascii])?;
    let shape = grid(a.shape.n1, a.shape.n2)?;
    check_count(shape, a.m)?;
    let params = anneal_params(&a.anneal)?;
    let (config, e) = simulated_annealing(shape, a.m, &params)?;
    let value = e.to_f64().unwrap_or(f64::NAN);
    let text = match a.format {
        Format::Csv => format!(
            "n1,n2,m,iterations,restarts,seed,energy_exact,energy\n{},{},{},{},{},{},{},{value:.9}\n",
            shape.n1(),
            shape.n2(),
            a.m,
            params.iterations,
            params.restarts,
            params.seed,
            e
        ),
        Format::Ascii => format!("energy {e} ({value:.9})\n{}", render::ascii(&config)),
        _ => format!("energy {e} ({value:.9})\n"),
    };
    print!("{text}");
    if let Some(path) = &a.out {
        emit(Some(path), &config.to_text())?;
    }
    Ok(())
}

pub fn certify(a: &CertifyArgs) -> Outcome {
    check_format(a.format, &[Format::Plain, Format::Csv])?;
    let config = match &a.config {
        Some(path) => {
            let config = read_config(path)?;
            let s = config.shape();
            if a.n1.is_some_and(|v| v != s.n1()) || a.n2.is_some_and(|v| v != s.n2()) {
                return Err(usage(format!("configuration file is for a {s} grid")));
            }
            if a.m.is_some_and(|m| m != config.m()) {
                return Err(usage(format!("configuration file has m={}", config.m())));
            }
            config
        }
        None => {
            let (Some(n1), Some(n2), Some(m)) = (a.n1, a.n2, a.m) else {
                return Err(usage("give --config or all of --n1, --n2 and --m"));
            };
            let shape = grid(n1, n2)?;
            check_count(shape, m)?;
            best_known(shape, m, &anneal_params(&a.anneal)?)?.0
        }
    };
    let (bound, solution) = lower_bound(config.shape(), config.m(), &a.solver)?;
    let cert = certify_optimal(&config, &bound)?;
    let text = match a.format {
        Format::Csv => format!("{}\n{}\n", toric_core::certify::Certificate::CSV_HEADER, cert.csv_row()),
        _ => format!("{cert}\nsolver       {} after {} iterations\n", solution.status, solution.iterations),
    };
    emit(a.out.as_deref(), &text)?;
    if solution.status != SolveStatus::Optimal {
        return Err(Failure::Solver(format!("solver stopped with status {}", solution.status)));
    }
    Ok(())
}

pub fn sweep(a: &SweepArgs) -> Outcome {
    check_format(a.format, &[Format::Csv])?;
    let options = SweepOptions { max_cells: a.max_cells, tol: a.tol, max_iter: a.max_iter, form: a.form.into(), keep_all: a.all };
    let entries = sweep_sharp_cases(a.n1, a.n2, &options)?;
    let mut text = String::from(SweepEntry::CSV_HEADER);
    text.push('\n');
    for e in &entries {
        text.push_str(&e.csv_row());
        text.push('\n');
    }
    emit(a.out.as_deref(), &text)
}

pub fn dims(a: &DimsArgs) -> Outcome {
    check_format(a.format, &[Format::Plain, Format::Csv])?;
    let (s, s0) = subspace_dims(a.shape.n1, a.shape.n2)?;
    let text = match a.format {
        Format::Csv => format!("n1,n2,dim_s,dim_s0\n{},{},{s},{s0}\n", a.shape.n1, a.shape.n2),
        _ => format!("{s} {s0}\n"),
    };
    emit(None, &text)
}

pub fn render_cmd(a: &RenderArgs) -> Outcome {
    check_format(a.format, &[Format::Ascii, Format::Svg])?;
    let config = match (&a.gens, &a.config) {
        (Some(list), None) => {
            let (Some(n1), Some(n2)) = (a.n1, a.n2) else {
                return Err(usage("--gens needs --n1 and --n2"));
            };
            let shape = grid(n1, n2)?;
            let gens = Generator::parse_list(list)?
                .into_iter()
                .map(|(gx, gy)| Generator::new(shape, gx, gy))
                .collect::<Result<Vec<_>, _>>()?;
            generate_lattice(shape, &gens)?
        }
        (None, Some(path)) => {
            let config = read_config(path)?;
            let s = config.shape();
            if a.n1.is_some_and(|v| v != s.n1()) || a.n2.is_some_and(|v| v != s.n2()) {
                return Err(usage(format!("configuration file is for a {s} grid")));
            }
            config
        }
        _ => return Err(usage("give exactly one of --gens and --config")),
    };
    let text = match a.format {
        Format::Svg => render::svg(&config),
        _ => format!("m {} energy {}\n{}", config.m(), energy(&config), render::ascii(&config)),
    };
    emit(a.out.as_deref(), &text)
}

pub fn export(a: &ExportArgs) -> Outcome {
    let shape = grid(a.shape.n1, a.shape.n2)?;
    check_count(shape, a.m)?;
    let program = build(shape, a.m, a.fold_square)?;
    emit(a.out.as_deref(), &conic_format::write_problem(&program.to_conic_form(a.form.into())))
}

pub fn solve_file(a: &SolveArgs) -> Outcome {
    check_format(a.format, &[Format::Plain, Format::Csv])?;
    let text = fs::read_to_string(&a.input).map_err(|e| usage(format!("cannot read {}: {e}", a.input.display())))?;
    let problem = conic_format::read_problem(&text)?;
    let sol = solve(&problem, a.tol, a.max_iter)?;
    let cert = extract_certified_bound(&problem, &sol);
    let out = match a.format {
        Format::Csv => format!(
            "status,iterations,primal_obj,dual_obj,gap,certified_bound\n{},{},{:.12},{:.12},{:.3e},{:.12}\n",
            sol.status, sol.iterations, sol.primal_obj, sol.dual_obj, sol.gap, cert.value
        ),
        _ => format!(
            "status       {}\niterations   {}\nprimal       {:.12}\ndual         {:.12}\ngap          {:.3e}\ncertified    {:.12}\n",
            sol.status, sol.iterations, sol.primal_obj, sol.dual_obj, sol.gap, cert.value
        ),
    };
    emit(a.out.as_deref(), &out)?;
    if sol.status != SolveStatus::Optimal {
        return Err(Failure::Solver(format!("solver stopped with status {}", sol.status)));
    }
    Ok(())
}
