use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Vector2, Vector3};

use super::basis::{BasisEval, BasisTag, ReferenceBasis};
use super::map::AffineMap;
use crate::error::{Error, Result};
use crate::mesh::{HybridMesh, Point, Shape};
use crate::quadrature::{gauss_legendre_unit, reference_area, reference_midpoint, LumpedQuadRule, OracleRule};

/// Points per edge for the edge moments of the interpolation operator.
const EDGE_POINTS: usize = 10;
/// Points per direction of the interior rule used by interpolation and projection.
const INTERIOR_POINTS: usize = 10;

/// One 2x2 block of the local lumped mass matrix.
#[derive(Clone, Copy, Debug)]
pub struct LocalBlock {
    /// Lumped quadrature point: local vertex index, or `n_vertices` for the midpoint.
    pub quad_point: usize,
    /// Local basis indices of the two functions attached to the point.
    pub slots: [usize; 2],
    pub matrix: Matrix2<f64>,
}

/// The physical basis on one cell.
///
/// Reference functions are Piola-mapped and then rescaled: a vertex function
/// of edge `e` gets unit normal component `u . n_e` at its vertex (with the
/// global edge normal), and the two bubbles are recombined to take the values
/// `(1, 0)` and `(0, 1)` at the midpoint. Coefficients are thus the normal
/// velocities at edge endpoints and the Cartesian velocity at the midpoint.
#[derive(Clone, Debug)]
pub struct LocalElement {
    pub cell: usize,
    pub shape: Shape,
    pub map: AffineMap,
    pub area: f64,
    basis: ReferenceBasis,
    vertex_scale: [f64; 2 * 4],
    /// Column `a` holds the coefficients of interior function `a` in the mapped bubbles.
    bubble_mix: Matrix2<f64>,
    /// Global edge ids of the local edges, in local order.
    edges: Vec<usize>,
    normals: Vec<Point>,
}

impl LocalElement {
    pub fn new(mesh: &HybridMesh, cell: usize) -> Result<Self> {
        let shape = mesh.cell(cell).shape();
        let map = AffineMap::for_cell(mesh, cell)?;
        let basis = ReferenceBasis::new(shape);
        let nv = shape.n_vertices();
        let ref_pts = LumpedQuadRule::new(shape).points();
        let edges: Vec<usize> = mesh.cell_edges(cell).iter().map(|ce| ce.edge).collect();
        let normals: Vec<Point> = edges.iter().map(|&e| mesh.edge_normal(e)).collect();

        let mut vertex_scale = [0.0; 8];
        for k in 0..2 * nv {
            let BasisTag::Vertex { edge, vertex } = basis.tag(k) else { unreachable!() };
            let e = basis.eval(ref_pts[vertex]);
            let (v, _) = map.piola_push(e.value[k], e.div[k]);
            let flux = v.dot(&normals[edge]);
            if flux.abs() < 1e-300 {
                return Err(Error::SingularSystem(format!("cell {cell}: zero normal trace of {}", basis.label(k))));
            }
            vertex_scale[k] = 1.0 / flux;
        }

        let e = basis.eval(ref_pts[nv]);
        let (b1, _) = map.piola_push(e.value[2 * nv], 0.0);
        let (b2, _) = map.piola_push(e.value[2 * nv + 1], 0.0);
        let bubble_mix = Matrix2::from_columns(&[b1, b2])
            .try_inverse()
            .ok_or_else(|| Error::SingularSystem(format!("cell {cell}: dependent bubbles")))?;

        let area = map.det * reference_area(shape);
        Ok(Self { cell, shape, map, area, basis, vertex_scale, bubble_mix, edges, normals })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn reference_basis(&self) -> &ReferenceBasis {
        &self.basis
    }

    pub fn tag(&self, k: usize) -> BasisTag {
        self.basis.tag(k)
    }

    /// Global edge id of local edge `k`.
    pub fn edge(&self, k: usize) -> usize {
        self.edges[k]
    }

    /// Physical basis values and divergences at a reference point.
    pub fn eval_reference(&self, p_ref: Point) -> BasisEval {
        let mut e = self.basis.eval(p_ref);
        let nv = self.shape.n_vertices();
        for k in 0..e.len {
            let (v, d) = self.map.piola_push(e.value[k], e.div[k]);
            e.value[k] = v;
            e.div[k] = d;
        }
        for k in 0..2 * nv {
            e.value[k] *= self.vertex_scale[k];
            e.div[k] *= self.vertex_scale[k];
        }
        let (i, j) = (2 * nv, 2 * nv + 1);
        let (v1, v2, d1, d2) = (e.value[i], e.value[j], e.div[i], e.div[j]);
        for a in 0..2 {
            let (c1, c2) = (self.bubble_mix[(0, a)], self.bubble_mix[(1, a)]);
            e.value[i + a] = v1 * c1 + v2 * c2;
            e.div[i + a] = d1 * c1 + d2 * c2;
        }
        e
    }

    pub fn eval(&self, x: Point) -> BasisEval {
        self.eval_reference(self.map.to_reference(x))
    }

    /// Field value and divergence of `sum_k coeffs[k] psi_k` at a reference point.
    pub fn field_reference(&self, coeffs: &[f64], p_ref: Point) -> (Vector2<f64>, f64) {
        let e = self.eval_reference(p_ref);
        (0..e.len).fold((Vector2::zeros(), 0.0), |(v, d), k| (v + e.value[k] * coeffs[k], d + e.div[k] * coeffs[k]))
    }

    pub fn field(&self, coeffs: &[f64], x: Point) -> (Vector2<f64>, f64) {
        self.field_reference(coeffs, self.map.to_reference(x))
    }

    /// Physical positions of the lumped quadrature points (vertices, then midpoint).
    pub fn quad_points(&self) -> Vec<Point> {
        LumpedQuadRule::new(self.shape).points().into_iter().map(|p| self.map.to_physical(p)).collect()
    }

    /// The 2x2 blocks of the lumped local mass, one per quadrature point.
    pub fn local_mass_lumped(&self) -> Result<Vec<LocalBlock>> {
        self.local_mass_lumped_with(&LumpedQuadRule::new(self.shape))
    }

    pub fn local_mass_lumped_with(&self, rule: &LumpedQuadRule) -> Result<Vec<LocalBlock>> {
        let pts = rule.points();
        let weights = rule.weights();
        let mut blocks = Vec::with_capacity(pts.len());
        for (q, (&p, &w)) in pts.iter().zip(&weights).enumerate() {
            let e = self.eval_reference(p);
            let [a, b] = self.basis.functions_at(q);
            let (va, vb) = (e.value[a], e.value[b]);
            let scale = w * self.area;
            let matrix = Matrix2::new(va.dot(&va), va.dot(&vb), vb.dot(&va), vb.dot(&vb)) * scale;
            if !(matrix[(0, 0)] > 0.0 && matrix.determinant() > 0.0) {
                return Err(Error::SingularSystem(format!("cell {}: lumped block at point {q} is not SPD", self.cell)));
            }
            blocks.push(LocalBlock { quad_point: q, slots: [a, b], matrix });
        }
        Ok(blocks)
    }

    /// Full local matrix `(psi_i, psi_j)_{h,K}` by direct quadrature of every pair.
    pub fn local_mass_full(&self, rule: &LumpedQuadRule) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (p, w) in rule.points().into_iter().zip(rule.weights()) {
            let e = self.eval_reference(p);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += w * self.area * e.value[i].dot(&e.value[j]);
                }
            }
        }
        m
    }

    /// Consistent local mass `(psi_i, psi_j)_K` with an oracle rule.
    pub fn local_mass_oracle(&self, rule: &OracleRule) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let e = self.eval_reference(p);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += w * self.map.det * e.value[i].dot(&e.value[j]);
                }
            }
        }
        m
    }

    /// `(div psi_i, div psi_j)_K` using the lumped rule, which is exact for these degree-2 integrands.
    pub fn local_stiffness(&self) -> DMatrix<f64> {
        let rule = LumpedQuadRule::new(self.shape);
        let n = self.dim();
        let mut k = DMatrix::zeros(n, n);
        for (p, w) in rule.points().into_iter().zip(rule.weights()) {
            let e = self.eval_reference(p);
            for i in 0..n {
                for j in 0..n {
                    k[(i, j)] += w * self.area * e.div[i] * e.div[j];
                }
            }
        }
        k
    }

    pub fn local_stiffness_oracle(&self, rule: &OracleRule) -> DMatrix<f64> {
        let n = self.dim();
        let mut k = DMatrix::zeros(n, n);
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let e = self.eval_reference(p);
            for i in 0..n {
                for j in 0..n {
                    k[(i, j)] += w * self.map.det * e.div[i] * e.div[j];
                }
            }
        }
        k
    }

    /// Inexact scalar product `(u, v)_{h,K}` with the default lumped rule.
    pub fn local_quad(&self, u: impl Fn(Point) -> Vector2<f64>, v: impl Fn(Point) -> Vector2<f64>) -> f64 {
        self.local_quad_with(&LumpedQuadRule::new(self.shape), u, v)
    }

    pub fn local_quad_with(
        &self,
        rule: &LumpedQuadRule,
        u: impl Fn(Point) -> Vector2<f64>,
        v: impl Fn(Point) -> Vector2<f64>,
    ) -> f64 {
        rule.points()
            .into_iter()
            .zip(rule.weights())
            .map(|(p, w)| {
                let x = self.map.to_physical(p);
                w * u(x).dot(&v(x))
            })
            .sum::<f64>()
            * self.area
    }

    /// Canonical degrees of freedom applied to `u`: for every local edge the moments
    /// of `u . n_e` against the two endpoint hat functions, then `int_K u`.
    pub fn dof_functionals(&self, u: impl Fn(Point) -> Vector2<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        self.accumulate_dofs(|x, w, row| {
            let v = u(x);
            out[row] += w * v.dot(&row_dir(row, self));
        });
        out
    }

    /// Matrix of the degrees of freedom applied to the local basis: `D[i][j] = l_i(psi_j)`.
    pub fn dof_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        self.accumulate_dofs(|x, w, row| {
            let e = self.eval(x);
            let dir = row_dir(row, self);
            for j in 0..n {
                out[(row, j)] += w * e.value[j].dot(&dir);
            }
        });
        out
    }

    /// Visits every integration point of every DOF functional as `(x, weight, row)`;
    /// functional `row` is `sum weight * u(x) . row_dir(row)`.
    fn accumulate_dofs(&self, mut visit: impl FnMut(Point, f64, usize)) {
        let nv = self.shape.n_vertices();
        let (s, w) = gauss_legendre_unit(EDGE_POINTS);
        let pts = self.quad_points();
        for k in 0..nv {
            let (a, b) = (pts[k], pts[(k + 1) % nv]);
            let len = (b - a).norm();
            for (&si, &wi) in s.iter().zip(&w) {
                let x = a + (b - a) * si;
                visit(x, wi * len * (1.0 - si), 2 * k);
                visit(x, wi * len * si, 2 * k + 1);
            }
        }
        let rule = interior_rule(self.shape);
        for (&p, &wq) in rule.points.iter().zip(&rule.weights) {
            let x = self.map.to_physical(p);
            visit(x, wq * self.map.det, 2 * nv);
            visit(x, wq * self.map.det, 2 * nv + 1);
        }
    }

    /// Coefficients of the canonical interpolant `Pi_K u` in the local basis.
    pub fn interpolate(&self, u: impl Fn(Point) -> Vector2<f64>) -> Result<DVector<f64>> {
        let rhs = self.dof_functionals(u);
        self.dof_matrix()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSystem(format!("cell {}: interpolation system", self.cell)))
    }

    /// Componentwise L2 projection onto linear polynomials.
    pub fn project_p1(&self, u: impl Fn(Point) -> Vector2<f64>) -> P1Field {
        let rule = interior_rule(self.shape);
        let center = self.map.to_physical(reference_midpoint(self.shape));
        let q = |x: Point| Vector3::new(1.0, x.x - center.x, x.y - center.y);
        let mut gram = Matrix3::zeros();
        let mut rhs = [Vector3::zeros(); 2];
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let x = self.map.to_physical(p);
            let qx = q(x);
            let ux = u(x);
            let wd = w * self.map.det;
            gram += qx * qx.transpose() * wd;
            rhs[0] += qx * ux.x * wd;
            rhs[1] += qx * ux.y * wd;
        }
        let chol = gram.cholesky().expect("P1 Gram matrix of a valid cell is SPD");
        P1Field { center, coeffs: [chol.solve(&rhs[0]), chol.solve(&rhs[1])] }
    }
}

/// Direction paired with `u` in DOF functional `row`.
fn row_dir(row: usize, el: &LocalElement) -> Vector2<f64> {
    let nv = el.shape.n_vertices();
    if row < 2 * nv {
        el.normals[row / 2]
    } else if row == 2 * nv {
        Vector2::new(1.0, 0.0)
    } else {
        Vector2::new(0.0, 1.0)
    }
}

fn interior_rule(shape: Shape) -> OracleRule {
    OracleRule::gauss(shape, INTERIOR_POINTS)
}

/// A vector field with linear components, expanded around `center`.
#[derive(Clone, Copy, Debug)]
pub struct P1Field {
    pub center: Point,
    /// Per component: `[constant, d/dx, d/dy]`.
    pub coeffs: [Vector3<f64>; 2],
}

impl P1Field {
    pub fn value(&self, x: Point) -> Vector2<f64> {
        let q = Vector3::new(1.0, x.x - self.center.x, x.y - self.center.y);
        Vector2::new(self.coeffs[0].dot(&q), self.coeffs[1].dot(&q))
    }

    /// The cell-wise constant part (value at the center).
    pub fn mean_part(&self) -> Vector2<f64> {
        Vector2::new(self.coeffs[0][0], self.coeffs[1][0])
    }
}
