//! Numerical check of the splitting `RT1 = P1^2 (+) span{Phi_B1, Phi_B2}` on the reference triangle.

use nalgebra::{DMatrix, Matrix2, Vector2};

use super::basis::ReferenceBasis;
use crate::error::{Error, Result};
use crate::mesh::{Point, Shape};
use crate::quadrature::OracleRule;

#[derive(Clone, Copy, Debug)]
pub struct SplittingReport {
    /// Rank of `P1^2` together with the two bubbles (expected 8 = dim RT1).
    pub rank: usize,
    pub smallest_singular_value: f64,
    /// Largest violation of the RT1 structure `p + x q` by any of the 8 fields.
    pub rt1_defect: f64,
    /// Rank of `{div Phi_B1, div Phi_B2}` inside P1 (expected 2).
    pub div_rank: usize,
    pub div_smallest_singular_value: f64,
    /// Smallest eigenvalue of the Gram matrix `(div Phi_Bi, div Phi_Bj)`.
    pub div_gram_min_eigenvalue: f64,
}

const RANK_TOL: f64 = 1e-10;

// Points on which P2 interpolation is unisolvent: vertices and edge midpoints.
const P2_NODES: [[f64; 2]; 6] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]];

fn p2_monomials(p: Point) -> [f64; 6] {
    [1.0, p.x, p.y, p.x * p.x, p.x * p.y, p.y * p.y]
}

/// Coefficients of a quadratic vector field in the monomial basis, x-component first.
fn p2_coefficients(f: impl Fn(Point) -> Vector2<f64>) -> Vec<f64> {
    let vander = DMatrix::from_fn(6, 6, |i, j| p2_monomials(Point::new(P2_NODES[i][0], P2_NODES[i][1]))[j]);
    let lu = vander.lu();
    let mut out = Vec::with_capacity(12);
    for comp in 0..2 {
        let rhs = DMatrix::from_fn(6, 1, |i, _| f(Point::new(P2_NODES[i][0], P2_NODES[i][1]))[comp]);
        out.extend(lu.solve(&rhs).expect("P2 nodes are unisolvent").iter());
    }
    out
}

/// Distance from the RT1 form: quadratic part must be `x * (a x + b y)`.
fn rt1_defect(c: &[f64]) -> f64 {
    [c[5], c[9], c[4] - c[11], c[3] - c[10]].iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn rank_and_min_sv(m: &DMatrix<f64>) -> (usize, f64) {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    (sv.iter().filter(|&&s| s > RANK_TOL * max).count(), min)
}

pub fn verify_splitting() -> Result<SplittingReport> {
    let basis = ReferenceBasis::new(Shape::Triangle);
    let (b1, b2) = (6, 7);

    let mut fields: Vec<Vec<f64>> = Vec::with_capacity(8);
    for comp in 0..2 {
        for mono in 0..3 {
            fields.push(p2_coefficients(|p| {
                let m = [1.0, p.x, p.y][mono];
                if comp == 0 {
                    Vector2::new(m, 0.0)
                } else {
                    Vector2::new(0.0, m)
                }
            }));
        }
    }
    for k in [b1, b2] {
        fields.push(p2_coefficients(|p| basis.eval(p).value[k]));
    }
    let rt1 = fields.iter().map(|c| rt1_defect(c)).fold(0.0, f64::max);
    let combined = DMatrix::from_fn(12, 8, |i, j| fields[j][i]);
    let (rank, smallest) = rank_and_min_sv(&combined);

    // div of the bubbles is linear: sample at the vertices to get P1 nodal coefficients
    let verts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    let divs = DMatrix::from_fn(3, 2, |i, j| basis.eval(verts[i]).div[[b1, b2][j]]);
    let (div_rank, div_min) = rank_and_min_sv(&divs);

    let rule = OracleRule::degree6(Shape::Triangle);
    let mut gram = Matrix2::zeros();
    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
        let e = basis.eval(p);
        let d = Vector2::new(e.div[b1], e.div[b2]);
        gram += d * d.transpose() * w;
    }
    let gram_min = gram.symmetric_eigenvalues().min();

    let report = SplittingReport {
        rank,
        smallest_singular_value: smallest,
        rt1_defect: rt1,
        div_rank,
        div_smallest_singular_value: div_min,
        div_gram_min_eigenvalue: gram_min,
    };
    if rank != 8 || div_rank != 2 || rt1 > 1e-12 || !(gram_min > 0.0) {
        return Err(Error::PropertyViolation(format!("RT1 splitting fails: {report:?}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_holds() {
        let r = verify_splitting().unwrap();
        assert_eq!(r.rank, 8);
        assert_eq!(r.div_rank, 2);
        assert!(r.smallest_singular_value > 1e-3);
        assert!(r.div_smallest_singular_value > 1e-3);
        assert!(r.div_gram_min_eigenvalue > 0.0);
        assert!(r.rt1_defect < 1e-12);
    }

    #[test]
    fn full_basis_lies_in_rt1_with_full_rank() {
        let basis = ReferenceBasis::new(Shape::Triangle);
        let cols: Vec<Vec<f64>> = (0..8).map(|k| p2_coefficients(|p| basis.eval(p).value[k])).collect();
        for c in &cols {
            assert!(rt1_defect(c) < 1e-12);
        }
        let m = DMatrix::from_fn(12, 8, |i, j| cols[j][i]);
        assert_eq!(rank_and_min_sv(&m).0, 8);
    }

    #[test]
    fn divergences_span_p1() {
        for shape in [Shape::Triangle, Shape::Parallelogram] {
            let basis = ReferenceBasis::new(shape);
            let pts = [Point::new(0.1, 0.2), Point::new(0.7, 0.1), Point::new(0.2, 0.6), Point::new(0.3, 0.3)];
            // samples of div at 4 points; P1 has dimension 3, so rank must be exactly 3
            let m = DMatrix::from_fn(4, basis.dim(), |i, k| basis.eval(pts[i]).div[k]);
            assert_eq!(rank_and_min_sv(&m).0, 3);
        }
    }
}
