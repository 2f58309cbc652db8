//! Reference bases for RT1 (triangle) and BDFM2 (parallelogram) in lumped form.
//!
//! Each vertex of the reference cell carries two functions, one per incident
//! edge, whose normal trace is linear on that edge and vanishes at the edge's
//! other endpoint. Two interior bubbles sit at the midpoint. Every function
//! vanishes at all vertex/midpoint quadrature points except its own, so the
//! vertex+midpoint rule gives a block-diagonal mass matrix.
//!
//! Local ordering: for local edge `k` (from local vertex `k` to `k+1`) the
//! function at its start vertex, then the one at its end vertex; the two
//! bubbles come last.

use nalgebra::Vector2;

use crate::mesh::{Point, Shape};
use crate::quadrature::LumpedQuadRule;

pub const MAX_DOFS: usize = 10;

type V2 = Vector2<f64>;

/// Which quadrature point a basis function is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    /// Normal-trace function of local edge `edge`, nonzero at local vertex `vertex`.
    Vertex { edge: usize, vertex: usize },
    /// Interior bubble `slot` in `{0, 1}`, attached to the midpoint.
    Interior { slot: usize },
}

/// Values and divergences of all basis functions at one point.
#[derive(Clone, Copy, Debug)]
pub struct BasisEval {
    pub value: [V2; MAX_DOFS],
    pub div: [f64; MAX_DOFS],
    pub len: usize,
}

impl BasisEval {
    fn zeros(len: usize) -> Self {
        Self { value: [V2::zeros(); MAX_DOFS], div: [0.0; MAX_DOFS], len }
    }

    fn set(&mut self, k: usize, (v, d): (V2, f64)) {
        self.value[k] = v;
        self.div[k] = d;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceBasis {
    pub shape: Shape,
}

impl ReferenceBasis {
    pub fn new(shape: Shape) -> Self {
        Self { shape }
    }

    pub fn dim(&self) -> usize {
        self.shape.n_dofs()
    }

    pub fn tag(&self, k: usize) -> BasisTag {
        let n = self.shape.n_vertices();
        if k < 2 * n {
            let edge = k / 2;
            let vertex = if k.is_multiple_of(2) { edge } else { (edge + 1) % n };
            BasisTag::Vertex { edge, vertex }
        } else {
            BasisTag::Interior { slot: k - 2 * n }
        }
    }

    /// Index of the lumped quadrature point (vertices first, then midpoint) a function belongs to.
    pub fn quad_point(&self, k: usize) -> usize {
        match self.tag(k) {
            BasisTag::Vertex { vertex, .. } => vertex,
            BasisTag::Interior { .. } => self.shape.n_vertices(),
        }
    }

    /// The two basis functions attached to quadrature point `q`.
    pub fn functions_at(&self, q: usize) -> [usize; 2] {
        let n = self.shape.n_vertices();
        if q == n {
            [2 * n, 2 * n + 1]
        } else {
            // start of edge q, end of edge q - 1
            [2 * q, 2 * ((q + n - 1) % n) + 1]
        }
    }

    /// Largest value norm of any function at a lumped quadrature point it does not belong to.
    pub fn nodality_defect(&self) -> f64 {
        let pts = LumpedQuadRule::new(self.shape).points();
        let mut worst: f64 = 0.0;
        for (q, &p) in pts.iter().enumerate() {
            let e = self.eval(p);
            for k in (0..self.dim()).filter(|&k| self.quad_point(k) != q) {
                worst = worst.max(e.value[k].norm());
            }
        }
        worst
    }

    /// Conventional label of function `k`, e.g. `Phi_{1,1}`.
    pub fn label(&self, k: usize) -> &'static str {
        const TRI: [&str; 8] =
            ["Phi_{1,1}", "Phi_{1,2}", "Phi_{2,1}", "Phi_{2,2}", "Phi_{3,2}", "Phi_{3,1}", "Phi_{B1}", "Phi_{B2}"];
        const QUAD: [&str; 10] = [
            "phi_{4,1}", "phi_{4,2}", "phi_{1,1}", "phi_{1,2}", "phi_{2,1}", "phi_{2,2}", "phi_{3,1}", "phi_{3,2}",
            "phi_{B1}", "phi_{B2}",
        ];
        match self.shape {
            Shape::Triangle => TRI[k],
            Shape::Parallelogram => QUAD[k],
        }
    }

    pub fn eval(&self, p: Point) -> BasisEval {
        match self.shape {
            Shape::Triangle => eval_triangle(p),
            Shape::Parallelogram => eval_parallelogram(p),
        }
    }
}

fn perp(g: V2) -> V2 {
    V2::new(g.y, -g.x)
}

/// `(f * w, grad f . w)` for scalar `f` and constant `w = perp(grad g)`.
fn times(f: f64, grad_f: V2, w: V2) -> (V2, f64) {
    (w * f, grad_f.dot(&w))
}

fn add(a: (V2, f64), b: (V2, f64), s: f64) -> (V2, f64) {
    (a.0 + b.0 * s, a.1 + b.1 * s)
}

fn eval_triangle(p: Point) -> BasisEval {
    let l = [1.0 - p.x - p.y, p.x, p.y];
    let g = [V2::new(-1.0, -1.0), V2::new(1.0, 0.0), V2::new(0.0, 1.0)];
    let r = [perp(g[0]), perp(g[1]), perp(g[2])];

    // lambda_i * perp(grad lambda_j)
    let w = |i: usize, j: usize| times(l[i], g[i], r[j]);
    // lambda_a lambda_b * perp(grad lambda_j)
    let w2 = |a: usize, b: usize, j: usize| times(l[a] * l[b], g[a] * l[b] + g[b] * l[a], r[j]);

    // B1 = l2 (l1 perp l3 - l3 perp l1), B2 = l3 (l1 perp l2 - l2 perp l1)   (1-based)
    let b1 = add(w2(1, 0, 2), w2(1, 2, 0), -1.0);
    let b2 = add(w2(2, 0, 1), w2(2, 1, 0), -1.0);
    let bub = |s1: f64, s2: f64| (b1.0 * s1 + b2.0 * s2, b1.1 * s1 + b2.1 * s2);

    let mut out = BasisEval::zeros(8);
    out.set(0, add(w(0, 1), bub(1.0, -2.0), 1.0));
    out.set(1, add(w(1, 0), bub(1.0, 1.0), 1.0));
    out.set(2, add(w(1, 2), bub(-2.0, 1.0), 1.0));
    out.set(3, add(w(2, 1), bub(1.0, -2.0), 1.0));
    out.set(4, add(w(2, 0), bub(1.0, 1.0), 1.0));
    out.set(5, add(w(0, 2), bub(-2.0, 1.0), 1.0));
    out.set(6, b1);
    out.set(7, b2);
    out
}

fn eval_parallelogram(p: Point) -> BasisEval {
    let (x, y) = (p.x, p.y);
    let l = [(1.0 - x) * (1.0 - y), x * (1.0 - y), x * y, (1.0 - x) * y];
    let g = [
        V2::new(-(1.0 - y), -(1.0 - x)),
        V2::new(1.0 - y, -x),
        V2::new(y, x),
        V2::new(-y, 1.0 - x),
    ];
    // perp(grad xi_ij) for the edge coordinates xi_12 = x, xi_23 = y, xi_34 = 1 - x, xi_41 = 1 - y
    let r12 = perp(V2::new(1.0, 0.0));
    let r23 = perp(V2::new(0.0, 1.0));
    let r34 = perp(V2::new(-1.0, 0.0));
    let r41 = perp(V2::new(0.0, -1.0));

    let f1 = (l[0] + l[3]) * (l[1] + l[2]);
    let df1 = (g[0] + g[3]) * (l[1] + l[2]) + (g[1] + g[2]) * (l[0] + l[3]);
    let b1 = times(f1, df1, r23);
    let f2 = (l[0] + l[1]) * (l[2] + l[3]);
    let df2 = (g[0] + g[1]) * (l[2] + l[3]) + (g[2] + g[3]) * (l[0] + l[1]);
    let b2 = times(f2, df2, r12);
    let w = |i: usize, r: V2| times(l[i], g[i], r);

    // Bubble signs are fixed by requiring each function to vanish at the midpoint,
    // where lambda_i = 1/4 and each bubble equals perp(grad xi)/4 of its own edge pair.
    let mut out = BasisEval::zeros(10);
    out.set(0, add(w(0, r12), b2, -1.0));
    out.set(1, add(w(1, r12), b2, -1.0));
    out.set(2, add(w(1, r23), b1, -1.0));
    out.set(3, add(w(2, r23), b1, -1.0));
    out.set(4, add(w(2, r34), b2, 1.0));
    out.set(5, add(w(3, r34), b2, 1.0));
    out.set(6, add(w(3, r41), b1, 1.0));
    out.set(7, add(w(0, r41), b1, 1.0));
    out.set(8, b1);
    out.set(9, b2);
    out
}
