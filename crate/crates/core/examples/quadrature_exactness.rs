//! Monomial exactness of the vertex+midpoint rule against the reference integrals.

use hdiv_wave::mesh::Shape;
use hdiv_wave::quadrature::{LumpedQuadRule, OracleRule};

fn main() {
    for shape in [Shape::Triangle, Shape::Parallelogram] {
        let rule = LumpedQuadRule::new(shape);
        println!("{shape:?}: weights {:?}", rule.weights());
        for degree in 0..=5 {
            println!("  max relative defect up to degree {degree}: {:.2e}", rule.exactness_defect(degree));
        }
        println!("  oracle rule defect up to degree 6: {:.2e}", OracleRule::degree6(shape).exactness_defect(6));
    }

    let tri = LumpedQuadRule::new(Shape::Triangle);
    let sq = LumpedQuadRule::new(Shape::Parallelogram);
    let x3: f64 = tri.points().iter().zip(tri.weights()).map(|(p, w)| w * p.x.powi(3)).sum::<f64>() * 0.5;
    let x4: f64 = sq.points().iter().zip(sq.weights()).map(|(p, w)| w * p.x.powi(4)).sum();
    println!("x^3 on the triangle: {x3:.6} (exact {:.6})", 1.0 / 20.0);
    println!("x^4 on the square:   {x4:.6} (exact {:.6})", 1.0 / 5.0);
}
