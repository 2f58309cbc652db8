//! Convergence for a user-supplied exact solution: the standing wave
//! `u = grad(cos(pi x) cos(pi y) cos(sqrt(2) pi t))`, which has zero normal trace on the unit square.

use hdiv_wave::analysis::eoc;
use hdiv_wave::benchmark::WaveSolution;
use hdiv_wave::mesh::{generate, MeshFamily, MeshKind, Point};
use hdiv_wave::simulation::{simulate_with, Discretization, SimOptions, TimeStep};
use nalgebra::Vector2;
use std::f64::consts::{PI, SQRT_2};

struct StandingWave;

impl StandingWave {
    fn grad_phi(x: Point) -> Vector2<f64> {
        Vector2::new(-PI * (PI * x.x).sin() * (PI * x.y).cos(), -PI * (PI * x.x).cos() * (PI * x.y).sin())
    }
}

impl WaveSolution for StandingWave {
    fn velocity(&self, x: Point, t: f64) -> Vector2<f64> {
        Self::grad_phi(x) * (SQRT_2 * PI * t).cos()
    }

    fn velocity_dt(&self, x: Point, t: f64) -> Vector2<f64> {
        Self::grad_phi(x) * (-SQRT_2 * PI * (SQRT_2 * PI * t).sin())
    }

    fn divergence(&self, x: Point, t: f64) -> f64 {
        -2.0 * PI * PI * (PI * x.x).cos() * (PI * x.y).cos() * (SQRT_2 * PI * t).cos()
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kind: MeshKind = std::env::args().nth(1).as_deref().unwrap_or("hybrid").parse()?;
    let family = MeshFamily::unit_square(kind, 4);
    let opts = SimOptions { tau: TimeStep::Fixed(0.002), t_final: 1.0, energy_every: 1000, ..SimOptions::default() };
    let mut rows = Vec::new();
    for level in 0..4 {
        let h = family.nominal_h(level);
        let disc = Discretization::new(generate(&family, level)?)?;
        let out = simulate_with(&disc, h, &opts, &StandingWave, |_, _, _| Ok(()))?;
        println!("h = {h:<8} energy {:.3e}  discrete {:.3e}", out.report.energy_error, out.report.discrete_error);
        rows.push((h, out.report.energy_error));
    }
    println!("eoc {:?}", eoc(&rows));
    Ok(())
}
