use hdiv_wave::mesh::{generate, signed_area, Cell, HybridMesh, MeshFamily, MeshKind, Point};
use proptest::prelude::*;

fn check_topology(mesh: &HybridMesh) -> Result<(), TestCaseError> {
    for e in 0..mesh.n_edges() {
        let cells = mesh.edge_cells(e);
        prop_assert!(cells.len() == 1 || cells.len() == 2);
        prop_assert_eq!(cells.len() == 1, mesh.is_boundary_edge(e));
        if let [a, b] = *cells {
            let sign = |c: usize| mesh.cell_edges(c).iter().find(|ce| ce.edge == e).unwrap().sign;
            prop_assert_eq!(sign(a), -sign(b));
        }
    }
    for c in 0..mesh.n_cells() {
        prop_assert!(signed_area(&mesh.cell_points(c)) > 0.0);
    }
    prop_assert!((mesh.total_area() - 1.0).abs() < 1e-12);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_meshes_are_valid(kind in 0usize..4, base in 1usize..6, level in 0usize..3, seed in any::<u64>(), jitter in 0.0..0.3f64) {
        let kind = [MeshKind::StructuredTriangle, MeshKind::StructuredQuad, MeshKind::Hybrid, MeshKind::Perturbed][kind];
        prop_assume!(kind != MeshKind::Hybrid || base >= 2);
        let family = MeshFamily {
            seed,
            perturbation: if kind == MeshKind::Perturbed { jitter } else { 0.0 },
            ..MeshFamily::unit_square(kind, base)
        };
        let mesh = generate(&family, level).unwrap();
        check_topology(&mesh)?;
        if kind != MeshKind::Perturbed {
            prop_assert!(mesh.quasi_uniformity() <= 4.0);
            prop_assert!((family.nominal_h(level) - 1.0 / (base << level) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn text_format_round_trips(level in 0usize..2, seed in any::<u64>()) {
        let family = MeshFamily { seed, ..MeshFamily::unit_square(MeshKind::Perturbed, 3) };
        let mesh = generate(&family, level).unwrap();
        let mut buf = Vec::new();
        mesh.write_text(&mut buf).unwrap();
        let back = HybridMesh::read_text(buf.as_slice()).unwrap();
        prop_assert_eq!(back.vertices(), mesh.vertices());
        prop_assert_eq!(back.edges(), mesh.edges());
    }
}

#[test]
fn perturbed_levels_are_not_nested() {
    let family = MeshFamily::unit_square(MeshKind::Perturbed, 4);
    let (coarse, fine) = (generate(&family, 0).unwrap(), generate(&family, 1).unwrap());
    let moved = coarse
        .vertices()
        .iter()
        .filter(|p| !fine.vertices().iter().any(|q| (*p - q).norm() < 1e-14))
        .count();
    assert!(moved > 0);
}

#[test]
fn invalid_cells_are_rejected() {
    let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>();
    let clockwise = HybridMesh::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]), vec![Cell::Triangle([0, 1, 2])]);
    assert!(clockwise.is_err());
    let trapezoid = HybridMesh::new(
        pts(&[(0.0, 0.0), (2.0, 0.0), (1.5, 1.0), (0.5, 1.0)]),
        vec![Cell::Parallelogram([0, 1, 2, 3])],
    );
    assert!(trapezoid.is_err());
    let single = HybridMesh::new(pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]), vec![Cell::Triangle([0, 1, 2])]).unwrap();
    assert_eq!((single.n_edges(), single.boundary_edges().len()), (3, 3));
}
