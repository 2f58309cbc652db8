//! Plain-text mesh format.
//!
//! ```text
//! vertices N cells M
//! x y            (N lines)
//! tri a b c      (or: quad a b c d; M lines)
//! ```

use std::io::{BufRead, Write};

use super::{Cell, HybridMesh, Point};
use crate::error::{Error, Result};

impl HybridMesh {
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "vertices {} cells {}", self.n_vertices(), self.n_cells())?;
        for p in self.vertices() {
            writeln!(out, "{} {}", p.x, p.y)?;
        }
        for cell in self.cells() {
            match cell {
                Cell::Triangle([a, b, c]) => writeln!(out, "tri {a} {b} {c}")?,
                Cell::Parallelogram([a, b, c, d]) => writeln!(out, "quad {a} {b} {c} {d}")?,
            }
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let parse_err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };

        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let header = header?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match tok.as_slice() {
            ["vertices", n, "cells", m] => (
                n.parse::<usize>().map_err(|_| parse_err(ln, "bad vertex count"))?,
                m.parse::<usize>().map_err(|_| parse_err(ln, "bad cell count"))?,
            ),
            _ => return Err(parse_err(ln, "expected 'vertices N cells M'")),
        };

        let mut vertices = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(ln, "missing vertex line"))?;
            let line = line?;
            let xy: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(ln, "bad coordinate"))?;
            match xy.as_slice() {
                [x, y] => vertices.push(Point::new(*x, *y)),
                _ => return Err(parse_err(ln, "expected 'x y'")),
            }
        }

        let mut cells = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(ln, "missing cell line"))?;
            let line = line?;
            let mut tok = line.split_whitespace();
            let kind = tok.next().unwrap_or("");
            let ids: Vec<usize> = tok
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(ln, "bad vertex index"))?;
            let cell = match (kind, ids.as_slice()) {
                ("tri", &[a, b, c]) => Cell::Triangle([a, b, c]),
                ("quad", &[a, b, c, d]) => Cell::Parallelogram([a, b, c, d]),
                _ => return Err(parse_err(ln, "expected 'tri a b c' or 'quad a b c d'")),
            };
            cells.push(cell);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content"));
        }
        HybridMesh::new(vertices, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate, MeshFamily, MeshKind};

    #[test]
    fn text_round_trip_is_exact() {
        let m = generate(&MeshFamily::unit_square(MeshKind::Perturbed, 3), 1).unwrap();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let back = HybridMesh::read_text(buf.as_slice()).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.cells(), m.cells());
        assert_eq!(back.edges(), m.edges());
    }

    #[test]
    fn rejects_malformed_input() {
        let bad = "vertices 3 cells 1\n0 0\n1 0\n0 1\npent 0 1 2\n";
        assert!(matches!(HybridMesh::read_text(bad.as_bytes()), Err(Error::Parse { line: 5, .. })));
        let short = "vertices 3 cells 1\n0 0\n1 0\n";
        assert!(HybridMesh::read_text(short.as_bytes()).is_err());
    }

    #[test]
    fn reads_mixed_cells() {
        let txt = "vertices 5 cells 2\n0 0\n1 0\n1 1\n0 1\n2 0.5\ntri 1 4 2\nquad 0 1 2 3\n";
        let m = HybridMesh::read_text(txt.as_bytes()).unwrap();
        assert_eq!(m.n_cells(), 2);
        assert_eq!(m.n_edges(), 6);
    }
}
