//! Hybrid triangle/parallelogram meshes with oriented edge topology.
//!
//! Cells are stored counterclockwise. Every edge carries a global orientation
//! from its lower to its higher vertex index; the global unit normal is that
//! direction rotated 90 degrees clockwise. A cell's local edge `k` runs from
//! its local vertex `k` to `k + 1`, and its sign is `+1` when the cell's
//! outward normal agrees with the global normal.

mod generate;
mod io;

pub use generate::{generate, MeshFamily, MeshKind};

use std::collections::HashMap;

use nalgebra::Vector2;

use crate::error::{Error, Result};

pub type Point = Vector2<f64>;

/// Tolerance on the parallelogram closure `v0 - v1 + v2 - v3`, relative to the cell diameter.
pub const PARALLELOGRAM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Triangle,
    Parallelogram,
}

impl Shape {
    pub fn n_vertices(self) -> usize {
        match self {
            Shape::Triangle => 3,
            Shape::Parallelogram => 4,
        }
    }

    /// Dimension of the local space: RT1 on triangles, BDFM2 on parallelograms.
    pub fn n_dofs(self) -> usize {
        2 * self.n_vertices() + 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Triangle([usize; 3]),
    Parallelogram([usize; 4]),
}

impl Cell {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Cell::Triangle(v) => v,
            Cell::Parallelogram(v) => v,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Cell::Triangle(_) => Shape::Triangle,
            Cell::Parallelogram(_) => Shape::Parallelogram,
        }
    }
}

/// An edge incident to a cell, in the cell's local (counterclockwise) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellEdge {
    pub edge: usize,
    /// `+1` if the cell's outward normal agrees with the global edge normal.
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct HybridMesh {
    vertices: Vec<Point>,
    cells: Vec<Cell>,
    /// `(lo, hi)` with `lo < hi`.
    edges: Vec<[usize; 2]>,
    cell_edges: Vec<Vec<CellEdge>>,
    edge_cells: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    boundary_edges: Vec<usize>,
    is_boundary: Vec<bool>,
}

impl HybridMesh {
    /// Validates cell geometry and builds the edge topology.
    pub fn new(vertices: Vec<Point>, cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidMesh("no cells".into()));
        }
        for (c, cell) in cells.iter().enumerate() {
            let vs = cell.vertices();
            if let Some(&bad) = vs.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} references vertex {bad} of {}",
                    vertices.len()
                )));
            }
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    if vs[i] == vs[j] {
                        return Err(Error::InvalidMesh(format!("cell {c} repeats vertex {}", vs[i])));
                    }
                }
            }
            let pts: Vec<Point> = vs.iter().map(|&v| vertices[v]).collect();
            let area = signed_area(&pts);
            let diam = diameter(&pts);
            if !(area > 1e-14 * diam * diam) {
                return Err(Error::InvertedCell { cell: c, area });
            }
            if let Cell::Parallelogram(_) = cell {
                let defect = (pts[0] - pts[1] + pts[2] - pts[3]).norm() / diam;
                if defect > PARALLELOGRAM_TOL {
                    return Err(Error::NotParallelogram { cell: c, defect });
                }
            }
        }

        let mut index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_cells: Vec<Vec<usize>> = Vec::new();
        let mut cell_edges = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let vs = cell.vertices();
            let n = vs.len();
            let mut local = Vec::with_capacity(n);
            for k in 0..n {
                let (a, b) = (vs[k], vs[(k + 1) % n]);
                let key = [a.min(b), a.max(b)];
                let e = *index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edge_cells.push(Vec::new());
                    edges.len() - 1
                });
                edge_cells[e].push(c);
                local.push(CellEdge { edge: e, sign: if a < b { 1 } else { -1 } });
            }
            cell_edges.push(local);
        }

        for (e, owners) in edge_cells.iter().enumerate() {
            let [lo, hi] = edges[e];
            if owners.len() > 2 {
                return Err(Error::NonManifoldEdge { lo, hi, count: owners.len() });
            }
            if owners.len() == 2 {
                let s0 = local_sign(&cell_edges[owners[0]], e);
                let s1 = local_sign(&cell_edges[owners[1]], e);
                if s0 == s1 {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({lo}, {hi}) traversed in the same direction by cells {} and {}",
                        owners[0], owners[1]
                    )));
                }
            }
        }

        let mut vertex_edges = vec![Vec::new(); vertices.len()];
        for (e, &[lo, hi]) in edges.iter().enumerate() {
            vertex_edges[lo].push(e);
            vertex_edges[hi].push(e);
        }
        let is_boundary: Vec<bool> = edge_cells.iter().map(|o| o.len() == 1).collect();
        let boundary_edges = (0..edges.len()).filter(|&e| is_boundary[e]).collect();

        Ok(Self {
            vertices,
            cells,
            edges,
            cell_edges,
            edge_cells,
            vertex_edges,
            boundary_edges,
            is_boundary,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &Cell {
        &self.cells[c]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn cell_edges(&self, c: usize) -> &[CellEdge] {
        &self.cell_edges[c]
    }

    /// Cells sharing edge `e` (one on the boundary, two in the interior).
    pub fn edge_cells(&self, e: usize) -> &[usize] {
        &self.edge_cells[e]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.is_boundary[e]
    }

    pub fn cell_points(&self, c: usize) -> Vec<Point> {
        self.cells[c].vertices().iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        signed_area(&self.cell_points(c))
    }

    pub fn cell_diameter(&self, c: usize) -> f64 {
        diameter(&self.cell_points(c))
    }

    pub fn cell_centroid(&self, c: usize) -> Point {
        let pts = self.cell_points(c);
        pts.iter().sum::<Point>() / pts.len() as f64
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_cells()).map(|c| self.cell_area(c)).sum()
    }

    pub fn h_max(&self) -> f64 {
        (0..self.n_cells()).map(|c| self.cell_diameter(c)).fold(0.0, f64::max)
    }

    /// `max_K h_K / min_K h_K`.
    pub fn quasi_uniformity(&self) -> f64 {
        let (lo, hi) = (0..self.n_cells())
            .map(|c| self.cell_diameter(c))
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        hi / lo
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [lo, hi] = self.edges[e];
        (self.vertices[hi] - self.vertices[lo]).norm()
    }

    /// Unit normal of edge `e`: the unit vector from `lo` to `hi` rotated clockwise.
    pub fn edge_normal(&self, e: usize) -> Point {
        let [lo, hi] = self.edges[e];
        let t = (self.vertices[hi] - self.vertices[lo]).normalize();
        Point::new(t.y, -t.x)
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (lo, hi)
    }
}

fn local_sign(local: &[CellEdge], e: usize) -> i8 {
    local.iter().find(|ce| ce.edge == e).map(|ce| ce.sign).unwrap_or(0)
}

/// Shoelace area of a counterclockwise polygon.
pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
}

pub fn diameter(pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn single_triangle_has_three_boundary_edges() {
        let m = HybridMesh::new(vec![p(0., 0.), p(1., 0.), p(0., 1.)], vec![Cell::Triangle([0, 1, 2])]).unwrap();
        assert_eq!(m.n_edges(), 3);
        assert_eq!(m.boundary_edges().len(), 3);
        assert!((m.total_area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn shared_diagonal_has_opposite_signs() {
        let m = HybridMesh::new(
            vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)],
            vec![Cell::Triangle([0, 1, 2]), Cell::Triangle([0, 2, 3])],
        )
        .unwrap();
        assert_eq!(m.n_edges(), 5);
        let diag = (0..m.n_edges()).find(|&e| m.edge(e) == [0, 2]).unwrap();
        assert!(!m.is_boundary_edge(diag));
        let s: Vec<i8> = m
            .edge_cells(diag)
            .iter()
            .map(|&c| m.cell_edges(c).iter().find(|ce| ce.edge == diag).unwrap().sign)
            .collect();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0], -s[1]);
    }

    #[test]
    fn outward_normal_matches_sign() {
        let m = HybridMesh::new(vec![p(0., 0.), p(2., 0.), p(0., 1.)], vec![Cell::Triangle([0, 1, 2])]).unwrap();
        let c = m.cell_centroid(0);
        for ce in m.cell_edges(0) {
            let [lo, _] = m.edge(ce.edge);
            let n = m.edge_normal(ce.edge) * ce.sign as f64;
            // outward normal points away from the centroid
            assert!(n.dot(&(m.vertex(lo) - c)) > 0.0);
        }
    }

    #[test]
    fn clockwise_cell_rejected() {
        let err = HybridMesh::new(vec![p(0., 0.), p(0., 1.), p(1., 0.)], vec![Cell::Triangle([0, 1, 2])]);
        assert!(matches!(err, Err(Error::InvertedCell { .. })));
    }

    #[test]
    fn non_parallelogram_rejected() {
        let err = HybridMesh::new(
            vec![p(0., 0.), p(1., 0.), p(1.2, 1.), p(0., 1.)],
            vec![Cell::Parallelogram([0, 1, 2, 3])],
        );
        assert!(matches!(err, Err(Error::NotParallelogram { .. })));
    }

    #[test]
    fn sheared_parallelogram_accepted() {
        let m = HybridMesh::new(
            vec![p(0., 0.), p(1., 0.), p(1.5, 1.), p(0.5, 1.)],
            vec![Cell::Parallelogram([0, 1, 2, 3])],
        )
        .unwrap();
        assert!((m.cell_area(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_manifold_edge_rejected() {
        let err = HybridMesh::new(
            vec![p(0., 0.), p(1., 0.), p(0.5, 1.), p(0.5, -1.), p(0.6, 2.)],
            vec![Cell::Triangle([0, 1, 2]), Cell::Triangle([1, 0, 3]), Cell::Triangle([0, 1, 4])],
        );
        assert!(matches!(err, Err(Error::NonManifoldEdge { count: 3, .. })));
    }
}
