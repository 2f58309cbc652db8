//! Energy of a standing mode under increasing damping.

use hdiv_wave::assembly::FeSpace;
use hdiv_wave::mesh::{generate, MeshFamily, MeshKind, Point};
use hdiv_wave::simulation::Discretization;
use hdiv_wave::timeloop::Leapfrog;
use nalgebra::Vector2;
use std::f64::consts::PI;

fn mode(space: &FeSpace) -> hdiv_wave::Result<nalgebra::DVector<f64>> {
    space.interpolate(|p: Point| Vector2::new(-(PI * p.x).sin() * (PI * p.y).cos(), -(PI * p.x).cos() * (PI * p.y).sin()))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let disc = Discretization::new(generate(&MeshFamily::unit_square(MeshKind::Hybrid, 16), 0)?)?;
    let ops = disc.split()?;
    let tau = 0.5 * disc.stability(&ops).tau_max;
    let u0 = mode(&disc.space)?;
    let v0 = u0.clone() * 0.0;
    let steps = (2.0 / tau).ceil() as usize;

    println!("damping,E(0),E(2),ratio,exp(-d*2)");
    for d in [0.0, 0.25, 0.5, 1.0, 2.0] {
        let mut lf = Leapfrog::homogeneous(&disc.space, ops.clone());
        let mut s = lf.init(&u0, &v0, 0.0, tau, d);
        let e0 = lf.energy(&s).total;
        for _ in 0..steps {
            lf.step(&mut s)?;
        }
        let e = lf.energy(&s).total;
        // for weak damping the energy of an oscillating mode decays roughly like exp(-d t)
        println!("{d},{e0:.6},{e:.6},{:.4},{:.4}", e / e0, (-d * s.t).exp());
    }
    Ok(())
}
