//! Shape of the lumped mass matrix: block sizes, storage and conditioning per mesh family.

use std::collections::BTreeMap;

use hdiv_wave::assembly::{assemble_lumped_mass, FeSpace, QuadPoint};
use hdiv_wave::mesh::{generate, MeshFamily, MeshKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [MeshKind::StructuredTriangle, MeshKind::StructuredQuad, MeshKind::Hybrid, MeshKind::Perturbed] {
        let space = FeSpace::new(generate(&MeshFamily::unit_square(kind, 8), 0)?)?;
        let mass = assemble_lumped_mass(&space)?;
        let mut sizes = BTreeMap::new();
        let mut worst: f64 = 1.0;
        for b in mass.blocks() {
            let key = match b.point {
                QuadPoint::Vertex(_) => format!("vertex {}x{}", b.dim(), b.dim()),
                QuadPoint::Midpoint(_) => "midpoint 2x2".to_string(),
            };
            *sizes.entry(key).or_insert(0) += 1;
            let eig = b.matrix.clone().symmetric_eigenvalues();
            worst = worst.max(eig.max() / eig.min());
        }
        let n = space.n_dof();
        println!("{}: {n} dofs, {} blocks", kind.name(), mass.blocks().len());
        for (k, count) in sizes {
            println!("  {k}: {count}");
        }
        println!(
            "  stored {} of {} entries, worst block condition {worst:.1}",
            mass.stored_entries(),
            n * n
        );
    }
    Ok(())
}
