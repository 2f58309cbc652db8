//! The lumped bases on both reference cells: which function lives where, and the P1 splitting.

use hdiv_wave::felement::{verify_splitting, ReferenceBasis};
use hdiv_wave::mesh::Shape;
use hdiv_wave::quadrature::LumpedQuadRule;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for shape in [Shape::Triangle, Shape::Parallelogram] {
        let basis = ReferenceBasis::new(shape);
        let points = LumpedQuadRule::new(shape).points();
        println!("{shape:?}, {} functions, nodality defect {:.1e}", basis.dim(), basis.nodality_defect());
        for (q, p) in points.iter().enumerate() {
            let [a, b] = basis.functions_at(q);
            let e = basis.eval(*p);
            println!(
                "  ({:.2}, {:.2}): {} = {:?}, {} = {:?}",
                p.x,
                p.y,
                basis.label(a),
                e.value[a].as_slice(),
                basis.label(b),
                e.value[b].as_slice()
            );
        }
    }

    let s = verify_splitting()?;
    println!("P1^2 + bubbles: rank {}, smallest singular value {:.3e}", s.rank, s.smallest_singular_value);
    println!("bubble divergences: rank {}, smallest singular value {:.3e}", s.div_rank, s.div_smallest_singular_value);
    Ok(())
}
