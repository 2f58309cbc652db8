//! Largest stable leapfrog step per level from power iteration on `M^{-1} K`.

use hdiv_wave::mesh::{generate, MeshFamily, MeshKind};
use hdiv_wave::simulation::Discretization;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("family,h,lambda_max,tau_max,tau_max/h,iterations");
    for kind in [MeshKind::StructuredTriangle, MeshKind::StructuredQuad, MeshKind::Hybrid, MeshKind::Perturbed] {
        let family = MeshFamily::unit_square(kind, 8);
        for level in 0..3 {
            let h = family.nominal_h(level);
            let disc = Discretization::new(generate(&family, level)?)?;
            let est = disc.stability(&disc.split()?);
            println!(
                "{},{h},{:.2},{:.6},{:.4},{}",
                kind.name(),
                est.lambda_max,
                est.tau_max,
                est.tau_max / h,
                est.iterations
            );
        }
    }
    Ok(())
}
