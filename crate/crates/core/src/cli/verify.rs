use std::f64::consts::PI;

use nalgebra::{DVector, Vector2};

use crate::analysis::{commuting_defect, sigma_p1_stats};
use crate::assembly::{assemble_lumped_mass_direct, CsrExt};
use crate::error::Result;
use crate::felement::{verify_splitting, ReferenceBasis};
use crate::mesh::{generate, MeshFamily, MeshKind, Point, Shape};
use crate::quadrature::{LumpedQuadRule, OracleRule};
use crate::simulation::Discretization;
use crate::timeloop::Leapfrog;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Replace the triangle vertex weight (keeping the weights summing to one);
    /// a negative control for the exactness check.
    pub triangle_beta: Option<f64>,
}

fn check(name: &'static str, value: f64, tol: f64, what: &str) -> Check {
    Check { name, passed: value <= tol, detail: format!("{what} = {value:.3e} (tol {tol:.0e})") }
}

/// Smooth field used by the commuting and sigma checks.
pub fn manufactured(x: Point) -> Vector2<f64> {
    Vector2::new((PI * x.x).sin() * (PI * x.y).cos(), x.x * x.x * x.y)
}

pub fn manufactured_div(x: Point) -> f64 {
    PI * (PI * x.x).cos() * (PI * x.y).cos() + x.x * x.x
}

/// Runs the property suite; each entry reports one property.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let tri = match opts.triangle_beta {
        Some(beta) => LumpedQuadRule::with_weights(Shape::Triangle, 1.0 - 3.0 * beta, beta),
        None => LumpedQuadRule::new(Shape::Triangle),
    };
    out.push(check("lumped rule exact to degree 2 (triangle)", tri.exactness_defect(2), 1e-12, "max rel. error"));
    let quad = LumpedQuadRule::new(Shape::Parallelogram);
    out.push(check("lumped rule exact to degree 3 (parallelogram)", quad.exactness_defect(3), 1e-12, "max rel. error"));
    for shape in [Shape::Triangle, Shape::Parallelogram] {
        let name = match shape {
            Shape::Triangle => "oracle rule exact to degree 6 (triangle)",
            Shape::Parallelogram => "oracle rule exact to degree 6 (parallelogram)",
        };
        out.push(check(name, OracleRule::degree6(shape).exactness_defect(6), 1e-13, "max rel. error"));
    }

    let nodal = ReferenceBasis::new(Shape::Triangle)
        .nodality_defect()
        .max(ReferenceBasis::new(Shape::Parallelogram).nodality_defect());
    out.push(check("basis nodality on reference cells", nodal, 1e-13, "max foreign value"));

    let hybrid = Discretization::new(generate(&MeshFamily::unit_square(MeshKind::Hybrid, 4), 0)?)?;
    let direct = assemble_lumped_mass_direct(&hybrid.space).to_dense();
    let blocks = hybrid.mass.to_dense();
    let n_blocks = hybrid.mass.blocks().len();
    let expected = hybrid.space.mesh.n_vertices() + hybrid.space.mesh.n_cells();
    out.push(Check {
        name: "lumped mass is block diagonal with SPD blocks",
        passed: (blocks - direct).amax() <= 1e-13 && n_blocks == expected,
        detail: format!("{n_blocks} factored blocks (expected {expected}), reconstruction checked to 1e-13"),
    });

    match verify_splitting() {
        Ok(r) => out.push(Check {
            name: "RT1 = P1^2 + bubbles splitting",
            passed: r.rank == 8 && r.div_rank == 2,
            detail: format!("rank {}, smallest singular value {:.3e}", r.rank, r.smallest_singular_value),
        }),
        Err(e) => out.push(Check { name: "RT1 = P1^2 + bubbles splitting", passed: false, detail: e.to_string() }),
    }

    let defect = commuting_defect(&hybrid.space, manufactured, manufactured_div)?;
    out.push(check("commuting interpolation (hybrid mesh)", defect, 1e-10, "max |(div(u - Pi u), div v)| / |div v|"));

    let quads = Discretization::new(generate(&MeshFamily::unit_square(MeshKind::StructuredQuad, 4), 0)?)?;
    let sigma = sigma_p1_stats(&quads.space, manufactured).parallelogram_max;
    out.push(check("sigma vanishes on parallelograms", sigma, 1e-12, "max |sigma_K(pi^1 u, v)|"));

    out.push(energy_check(&hybrid)?);
    Ok(out)
}

fn energy_check(disc: &Discretization) -> Result<Check> {
    let ops = disc.split()?;
    let tau = 0.5 * disc.stability(&ops).tau_max;
    let u0 = disc.space.interpolate(manufactured)?;
    let v0 = DVector::zeros(disc.space.n_dof());
    let mut lf = Leapfrog::homogeneous(&disc.space, ops);
    let mut s = lf.init(&u0, &v0, 0.0, tau, 0.0);
    let e0 = lf.energy(&s).total;
    let mut drift: f64 = 0.0;
    for _ in 0..1000 {
        lf.step(&mut s)?;
        drift = drift.max((lf.energy(&s).total - e0).abs() / e0);
    }
    Ok(check("leapfrog energy conservation (d = 0, 1000 steps)", drift, 1e-8, "max rel. drift"))
}
