use nalgebra::{DVector, Vector2};

use crate::assembly::FeSpace;
use crate::felement::LocalElement;
use crate::mesh::{Point, Shape};
use crate::quadrature::{LumpedQuadRule, OracleRule};

/// Local quadrature error `sigma_K(u, v_h) = (u, v_h)_{h,K} - (u, v_h)_K`.
///
/// `v_local` are the coefficients of `v_h` in the local basis of `el`; the exact
/// product is evaluated with the degree-6 oracle rule.
pub fn sigma_cell(el: &LocalElement, u: impl Fn(Point) -> Vector2<f64>, v_local: &[f64]) -> f64 {
    let lumped = LumpedQuadRule::new(el.shape);
    let v = |x: Point| el.field(v_local, x).0;
    let inexact = el.local_quad_with(&lumped, &u, v);
    let oracle = OracleRule::degree6(el.shape);
    let exact = el.map.integrate(&oracle, |x| u(x).dot(&v(x)));
    inexact - exact
}

/// Global quadrature error `sigma_h(u, v_h)`, summed cell by cell in order.
pub fn sigma_h(space: &FeSpace, u: impl Fn(Point) -> Vector2<f64>, v_h: &DVector<f64>) -> f64 {
    space
        .elements
        .iter()
        .enumerate()
        .map(|(c, el)| sigma_cell(el, &u, &space.local_coeffs(v_h, c)))
        .sum()
}

/// Extremes of `sigma_K(pi^1 u, psi)` over cells `K` and local basis functions `psi`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SigmaStats {
    /// `max |sigma_K|` over parallelogram cells.
    pub parallelogram_max: f64,
    /// `max |sigma_K| / |div psi|_{L2(K)}` over triangle cells.
    pub triangle_max_ratio: f64,
    pub n_parallelograms: usize,
    pub n_triangles: usize,
}

/// Evaluates `sigma_K(pi^1_K u, psi_k)` for every cell and local basis function.
pub fn sigma_p1_stats(space: &FeSpace, u: impl Fn(Point) -> Vector2<f64>) -> SigmaStats {
    let mut stats = SigmaStats::default();
    for el in &space.elements {
        let proj = el.project_p1(&u);
        let oracle = OracleRule::degree6(el.shape);
        let mut unit = vec![0.0; el.dim()];
        for k in 0..el.dim() {
            unit.fill(0.0);
            unit[k] = 1.0;
            let s = sigma_cell(el, |x| proj.value(x), &unit).abs();
            match el.shape {
                Shape::Parallelogram => stats.parallelogram_max = stats.parallelogram_max.max(s),
                Shape::Triangle => {
                    let div_norm = el.map.integrate(&oracle, |x| el.eval(x).div[k].powi(2)).sqrt();
                    if div_norm > 0.0 {
                        stats.triangle_max_ratio = stats.triangle_max_ratio.max(s / div_norm);
                    }
                }
            }
        }
        match el.shape {
            Shape::Parallelogram => stats.n_parallelograms += 1,
            Shape::Triangle => stats.n_triangles += 1,
        }
    }
    stats
}
