//! Plain-text exchange format for [`ConicProblem`].
//!
//! Line based, whitespace separated, `#` starts a comment line. All
//! indices are 0-based; numbers use Rust's shortest round-trip formatting.
//!
//! ```text
//! conic 1
//! vars <N>
//! upper <U>
//! objective <nnz>
//! <i> <c_i>                      (nnz lines)
//! equalities <rows>
//! row <nnz> <rhs>                (per equality row)
//! <i> <a_i>                      (nnz lines)
//! blocks <count>
//! psd2 | nonneg                  (per block)
//! entry <nnz> <constant>         (3 entries p, q, r of [[p,q],[q,r]] for psd2, 1 for nonneg)
//! <i> <coefficient>              (nnz lines)
//! end
//! ```
//!
//! Table terms are expanded into plain triplets on export, so a problem
//! read back evaluates identically but carries no shared table.

use std::fmt::Write as _;

use super::{AffineExpr, ConeBlock, ConeKind, ConicProblem, LinearRow, Term};
use crate::error::{Error, Result};

pub fn write_problem(problem: &ConicProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "conic 1");
    let _ = writeln!(out, "vars {}", problem.num_vars);
    let _ = writeln!(out, "upper {:?}", problem.upper_bound);
    let obj: Vec<(usize, f64)> =
        problem.objective.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    write_triplets(&mut out, &format!("objective {}", obj.len()), &obj);
    let _ = writeln!(out, "equalities {}", problem.equalities.len());
    for row in &problem.equalities {
        write_triplets(&mut out, &format!("row {} {:?}", row.terms.len(), row.rhs), &row.terms);
    }
    let _ = writeln!(out, "blocks {}", problem.blocks.len());
    for block in &problem.blocks {
        let _ = writeln!(
            out,
            "{}",
            match block.kind {
                ConeKind::Psd2 => "psd2",
                ConeKind::Nonneg => "nonneg",
            }
        );
        for expr in &block.entries {
            let terms = problem.expand(expr);
            write_triplets(&mut out, &format!("entry {} {:?}", terms.len(), expr.constant), &terms);
        }
    }
    let _ = writeln!(out, "end");
    out
}

fn write_triplets(out: &mut String, header: &str, terms: &[(usize, f64)]) {
    let _ = writeln!(out, "{header}");
    for (i, v) in terms {
        let _ = writeln!(out, "{i} {v:?}");
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Self { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self) -> Result<Vec<&'a str>> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok(l.split_whitespace().collect())
            }
            None => Err(Error::Parse { line: self.last + 1, msg: "unexpected end of input".into() }),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.last, msg: msg.into() }
    }

    fn keyed(&mut self, key: &str, args: usize) -> Result<Vec<&'a str>> {
        let fields = self.next()?;
        if fields.first() != Some(&key) || fields.len() != args + 1 {
            return Err(self.err(format!("expected `{key}` with {args} argument(s)")));
        }
        Ok(fields[1..].to_vec())
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(format!("invalid number `{s}`")))
    }

    fn triplets(&mut self, count: usize, nvars: usize) -> Result<Vec<(usize, f64)>> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let f = self.next()?;
            if f.len() != 2 {
                return Err(self.err("expected `<index> <value>`"));
            }
            let i: usize = self.num(f[0])?;
            if i >= nvars {
                return Err(self.err(format!("index {i} out of range for {nvars} variables")));
            }
            out.push((i, self.num(f[1])?));
        }
        Ok(out)
    }
}

pub fn read_problem(text: &str) -> Result<ConicProblem> {
    let mut lines = Lines::new(text);
    let header = lines.keyed("conic", 1)?;
    if header[0] != "1" {
        return Err(lines.err(format!("unsupported version {}", header[0])));
    }
    let nvars: usize = {
        let f = lines.keyed("vars", 1)?;
        lines.num(f[0])?
    };
    let upper: f64 = {
        let f = lines.keyed("upper", 1)?;
        lines.num(f[0])?
    };
    let mut problem = ConicProblem::new(nvars, vec![0.0; nvars], upper);
    let count: usize = {
        let f = lines.keyed("objective", 1)?;
        lines.num(f[0])?
    };
    for (i, v) in lines.triplets(count, nvars)? {
        problem.objective[i] += v;
    }
    let rows: usize = {
        let f = lines.keyed("equalities", 1)?;
        lines.num(f[0])?
    };
    for _ in 0..rows {
        let f = lines.keyed("row", 2)?;
        let (nnz, rhs): (usize, f64) = (lines.num(f[0])?, lines.num(f[1])?);
        let terms = lines.triplets(nnz, nvars)?;
        problem.equalities.push(LinearRow { terms, rhs });
    }
    let blocks: usize = {
        let f = lines.keyed("blocks", 1)?;
        lines.num(f[0])?
    };
    for _ in 0..blocks {
        let f = lines.next()?;
        let kind = match f.as_slice() {
            ["psd2"] => ConeKind::Psd2,
            ["nonneg"] => ConeKind::Nonneg,
            _ => return Err(lines.err("expected `psd2` or `nonneg`")),
        };
        let mut entries = Vec::with_capacity(kind.entries());
        for _ in 0..kind.entries() {
            let f = lines.keyed("entry", 2)?;
            let (nnz, constant): (usize, f64) = (lines.num(f[0])?, lines.num(f[1])?);
            let terms = lines
                .triplets(nnz, nvars)?
                .into_iter()
                .map(|(index, coeff)| Term::Var { index, coeff })
                .collect();
            entries.push(AffineExpr { constant, terms });
        }
        problem.blocks.push(ConeBlock { kind, entries });
    }
    lines.keyed("end", 0)?;
    if let Some((n, _)) = lines.inner.next() {
        return Err(Error::Parse { line: n, msg: "trailing content after `end`".into() });
    }
    problem.validate()?;
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn sample() -> ConicProblem {
        let mut p = ConicProblem::new(3, vec![1.0, 0.0, -0.5], 4.0);
        p.table = Matrix::from_rows(&[vec![0.25, -1.0]]).unwrap();
        p.equalities.push(LinearRow { terms: vec![(0, 1.0), (2, 1.0)], rhs: 1.5 });
        p.blocks.push(ConeBlock {
            kind: ConeKind::Psd2,
            entries: vec![
                AffineExpr { constant: 1.0, terms: vec![Term::Table { row: 0, offset: 1, scale: 2.0 }] },
                AffineExpr { constant: 0.1, terms: vec![Term::Var { index: 0, coeff: 0.5 }] },
                AffineExpr::constant(3.0),
            ],
        });
        p.blocks.push(ConeBlock {
            kind: ConeKind::Nonneg,
            entries: vec![AffineExpr { constant: -1.0 / 3.0, terms: vec![Term::Var { index: 1, coeff: 1.0 }] }],
        });
        p
    }

    #[test]
    fn round_trip_preserves_values() {
        let p = sample();
        let text = write_problem(&p);
        let q = read_problem(&text).unwrap();
        assert_eq!(q.objective, p.objective);
        assert_eq!(q.equalities, p.equalities);
        let y = [0.3, -0.7, 1.1];
        assert_eq!(p.block_values(&y), q.block_values(&y));
        assert_eq!(write_problem(&q), text);
    }

    #[test]
    fn rejects_malformed_input() {
        let text = write_problem(&sample());
        assert!(read_problem(&text.replace("conic 1", "conic 2")).is_err());
        assert!(read_problem(&text.replace("end", "")).is_err());
        assert!(read_problem(&text.replace("psd2", "psd3")).is_err());
        let err = read_problem("conic 1\nvars 1\nupper 1\nobjective 1\n5 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
    }
}
