use nalgebra::DVector;

use crate::assembly::FeSpace;
use crate::benchmark::WaveSolution;
use crate::error::Result;
use crate::mesh::Shape;
use crate::quadrature::{LumpedQuadRule, OracleRule};

/// Rule for errors of non-polynomial fields: 6x6 Gauss (degree 11 on squares, 10 on triangles).
pub fn error_rule(shape: Shape) -> OracleRule {
    OracleRule::gauss(shape, 6)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    /// Nominal mesh size.
    pub h: f64,
    /// `|u_t(T) - v_h(T)|_{L2}`
    pub velocity_error: f64,
    /// `|div(u(T) - u_h(T))|_{L2}`
    pub div_error: f64,
    /// Sum of the two parts above.
    pub energy_error: f64,
    /// `(|pi^1 u_t(T) - v_h(T)|_h^2 + |div(Pi_h u(T) - u_h(T))|^2)^{1/2}`
    pub discrete_error: f64,
}

impl ErrorReport {
    pub fn compute(
        space: &FeSpace,
        h: f64,
        exact: &dyn WaveSolution,
        u_h: &DVector<f64>,
        v_h: &DVector<f64>,
        t: f64,
    ) -> Result<Self> {
        let (velocity_error, div_error) = energy_error(space, exact, u_h, v_h, t);
        let discrete_error = discrete_error(space, exact, u_h, v_h, t)?;
        Ok(Self { h, velocity_error, div_error, energy_error: velocity_error + div_error, discrete_error })
    }
}

/// `(|u_t(t) - v_h|_{L2}, |div u(t) - div u_h|_{L2})` with per-cell oracle integration.
pub fn energy_error(
    space: &FeSpace,
    exact: &dyn WaveSolution,
    u_h: &DVector<f64>,
    v_h: &DVector<f64>,
    t: f64,
) -> (f64, f64) {
    let rules = [error_rule(Shape::Triangle), error_rule(Shape::Parallelogram)];
    let (mut vel, mut div) = (0.0, 0.0);
    for (c, el) in space.elements.iter().enumerate() {
        let rule = &rules[usize::from(el.shape == Shape::Parallelogram)];
        let (uc, vc) = (space.local_coeffs(u_h, c), space.local_coeffs(v_h, c));
        for (&p, &w) in rule.points.iter().zip(&rule.weights) {
            let x = el.map.to_physical(p);
            let e = el.eval_reference(p);
            let (mut vv, mut du) = (nalgebra::Vector2::zeros(), 0.0);
            for k in 0..e.len {
                vv += e.value[k] * vc[k];
                du += e.div[k] * uc[k];
            }
            let wd = w * el.map.det;
            vel += wd * (exact.velocity_dt(x, t) - vv).norm_squared();
            div += wd * (exact.divergence(x, t) - du).powi(2);
        }
    }
    (vel.sqrt(), div.sqrt())
}

/// `(|pi^1_h u_t - v_h|_h^2 + |div(Pi_h u - u_h)|_{L2}^2)^{1/2}` at time `t`.
pub fn discrete_error(
    space: &FeSpace,
    exact: &dyn WaveSolution,
    u_h: &DVector<f64>,
    v_h: &DVector<f64>,
    t: f64,
) -> Result<f64> {
    let pi_u = space.interpolate(|x| exact.velocity(x, t))?;
    let diff = pi_u - u_h;
    let mut total = 0.0;
    for (c, el) in space.elements.iter().enumerate() {
        let rule = LumpedQuadRule::new(el.shape);
        let proj = el.project_p1(|x| exact.velocity_dt(x, t));
        let (dc, vc) = (space.local_coeffs(&diff, c), space.local_coeffs(v_h, c));
        // the lumped rule is exact for |div|^2 (degree 2) on both shapes
        for (p, w) in rule.points().into_iter().zip(rule.weights()) {
            let (v, _) = el.field_reference(&vc, p);
            let (_, d) = el.field_reference(&dc, p);
            let x = el.map.to_physical(p);
            total += w * el.area * ((proj.value(x) - v).norm_squared() + d * d);
        }
    }
    Ok(total.sqrt())
}
