use nalgebra::{DVector, Vector2};

use crate::assembly::FeSpace;
use crate::error::Result;
use crate::mesh::Point;
use crate::quadrature::{gauss_legendre_unit, OracleRule};

fn fine_rule(shape: crate::mesh::Shape) -> OracleRule {
    OracleRule::gauss(shape, 10)
}

/// `max_j |(div(u - Pi_h u), div psi_j)| / |div psi_j|` over all global basis
/// functions with non-vanishing divergence.
pub fn commuting_defect(space: &FeSpace, u: impl Fn(Point) -> Vector2<f64>, div_u: impl Fn(Point) -> f64) -> Result<f64> {
    let pi_u = space.interpolate(&u)?;
    let n = space.n_dof();
    let mut pairing = vec![0.0; n];
    let mut norm_sq = vec![0.0; n];
    for (c, el) in space.elements.iter().enumerate() {
        let rule = fine_rule(el.shape);
        let coeffs = space.local_coeffs(&pi_u, c);
        let dofs = space.dofmap.cell_dofs(c);
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let x = el.map.to_physical(p);
            let e = el.eval_reference(p);
            let div_pi: f64 = (0..e.len).map(|k| e.div[k] * coeffs[k]).sum();
            let r = div_u(x) - div_pi;
            let wd = w * el.map.det;
            for (k, &d) in dofs.iter().enumerate() {
                pairing[d] += wd * r * e.div[k];
                norm_sq[d] += wd * e.div[k] * e.div[k];
            }
        }
    }
    let worst = pairing
        .iter()
        .zip(&norm_sq)
        .filter(|(_, &ns)| ns > 1e-24)
        .map(|(p, ns)| p.abs() / ns.sqrt())
        .fold(0.0, f64::max);
    Ok(worst)
}

/// `|u - Pi_h u|_{L2}`.
pub fn interpolation_error(space: &FeSpace, u: impl Fn(Point) -> Vector2<f64>) -> Result<f64> {
    let pi_u = space.interpolate(&u)?;
    let mut total = 0.0;
    for (c, el) in space.elements.iter().enumerate() {
        let rule = fine_rule(el.shape);
        let coeffs = space.local_coeffs(&pi_u, c);
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let (v, _) = el.field_reference(&coeffs, p);
            total += w * el.map.det * (u(el.map.to_physical(p)) - v).norm_squared();
        }
    }
    Ok(total.sqrt())
}

/// Largest jump of the normal component `u_h . n_e` across interior edges,
/// sampled at Gauss points along each edge.
pub fn normal_trace_mismatch(space: &FeSpace, coeffs: &DVector<f64>) -> f64 {
    let mesh = &space.mesh;
    let (s, _) = gauss_legendre_unit(4);
    let mut worst: f64 = 0.0;
    for e in 0..mesh.n_edges() {
        let cells = mesh.edge_cells(e);
        if cells.len() != 2 {
            continue;
        }
        let [a, b] = mesh.edge(e);
        let (pa, pb) = (mesh.vertex(a), mesh.vertex(b));
        let n = mesh.edge_normal(e);
        let (c0, c1) = (cells[0], cells[1]);
        let (l0, l1) = (space.local_coeffs(coeffs, c0), space.local_coeffs(coeffs, c1));
        for &si in &s {
            let x = pa + (pb - pa) * si;
            let v0 = space.elements[c0].field(&l0, x).0;
            let v1 = space.elements[c1].field(&l1, x).0;
            worst = worst.max(((v0 - v1).dot(&n)).abs());
        }
    }
    worst
}
