//! Grid drawings. Row `x` of the drawing holds the cells `(x, 0..n2)`;
//! particles are black.

use std::fmt::Write;

use toric_core::torus::{Configuration, GridPoint};

const CELL: usize = 20;

pub fn ascii(config: &Configuration) -> String {
    let s = config.shape();
    let mut out = String::with_capacity(s.n() + s.n1());
    for x in 0..s.n1() {
        for y in 0..s.n2() {
            out.push(if config.contains(GridPoint::new(x, y)) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

pub fn svg(config: &Configuration) -> String {
    let s = config.shape();
    let (w, h) = (s.n2() * CELL, s.n1() * CELL);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for x in 0..s.n1() {
        for y in 0..s.n2() {
            let fill = if config.contains(GridPoint::new(x, y)) { "black" } else { "white" };
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"gray\"/>",
                y * CELL,
                x * CELL
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_core::torus::GridShape;

    #[test]
    fn drawings() {
        let s = GridShape::new(2, 3).unwrap();
        let c = Configuration::new(s, [GridPoint::new(0, 1), GridPoint::new(1, 2)]).unwrap();
        assert_eq!(ascii(&c), ".#.\n..#\n");
        let svg = svg(&c);
        assert_eq!(svg.matches("<rect").count(), 6);
        assert_eq!(svg.matches("fill=\"black\"").count(), 2);
        assert!(svg.contains("width=\"60\" height=\"40\""));
    }
}
