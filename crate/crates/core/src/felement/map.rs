use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::mesh::{HybridMesh, Point, Shape};
use crate::quadrature::OracleRule;

/// Affine map `x = J x_ref + b` from the reference cell onto a physical cell.
#[derive(Clone, Copy, Debug)]
pub struct AffineMap {
    pub cell: usize,
    pub jac: Matrix2<f64>,
    pub offset: Point,
    pub det: f64,
    /// `J^{-T}`
    pub inv_t: Matrix2<f64>,
}

impl AffineMap {
    pub fn new(cell: usize, jac: Matrix2<f64>, offset: Point) -> Result<Self> {
        let det = jac.determinant();
        if !(det > 0.0) {
            return Err(Error::InvertedCell { cell, area: det });
        }
        let inv_t = jac.try_inverse().ok_or(Error::InvertedCell { cell, area: det })?.transpose();
        Ok(Self { cell, jac, offset, det, inv_t })
    }

    pub fn identity() -> Self {
        Self::new(0, Matrix2::identity(), Point::zeros()).expect("identity is valid")
    }

    /// Map from the reference cell onto cell `c`; the first local vertex is the image of the origin.
    pub fn for_cell(mesh: &HybridMesh, c: usize) -> Result<Self> {
        let p = mesh.cell_points(c);
        let second = match mesh.cell(c).shape() {
            Shape::Triangle => p[2],
            Shape::Parallelogram => p[3],
        };
        let jac = Matrix2::from_columns(&[p[1] - p[0], second - p[0]]);
        Self::new(c, jac, p[0])
    }

    pub fn to_physical(&self, x_ref: Point) -> Point {
        self.jac * x_ref + self.offset
    }

    pub fn to_reference(&self, x: Point) -> Point {
        self.inv_t.transpose() * (x - self.offset)
    }

    /// Contravariant Piola transform of a reference value and divergence.
    pub fn piola_push(&self, ref_value: Vector2<f64>, ref_div: f64) -> (Vector2<f64>, f64) {
        (self.jac * ref_value / self.det, ref_div / self.det)
    }

    /// Integrates a function of the physical coordinates with a reference rule.
    pub fn integrate(&self, rule: &OracleRule, f: impl Fn(Point) -> f64) -> f64 {
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&p, &w)| w * f(self.to_physical(p)))
            .sum::<f64>()
            * self.det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_leaves_values() {
        let m = AffineMap::identity();
        let (v, d) = m.piola_push(Vector2::new(0.3, -1.2), 2.5);
        assert_eq!(v, Vector2::new(0.3, -1.2));
        assert_eq!(d, 2.5);
    }

    #[test]
    fn uniform_scaling() {
        let s = 3.0;
        let m = AffineMap::new(0, Matrix2::identity() * s, Point::zeros()).unwrap();
        let (v, d) = m.piola_push(Vector2::new(1.0, 2.0), 1.0);
        assert!((v - Vector2::new(1.0, 2.0) / s).norm() < 1e-15);
        assert!((d - 1.0 / (s * s)).abs() < 1e-15);
    }

    #[test]
    fn shear_map() {
        let m = AffineMap::new(0, Matrix2::new(1.0, 1.0, 0.0, 1.0), Point::zeros()).unwrap();
        let (v, d) = m.piola_push(Vector2::new(0.0, 1.0), 0.7);
        assert_eq!(v, Vector2::new(1.0, 1.0));
        assert_eq!(d, 0.7);
    }

    #[test]
    fn inverted_map_rejected() {
        let err = AffineMap::new(4, Matrix2::new(0.0, 1.0, 1.0, 0.0), Point::zeros());
        assert!(matches!(err, Err(Error::InvertedCell { cell: 4, .. })));
    }

    #[test]
    fn reference_round_trip() {
        let m = AffineMap::new(0, Matrix2::new(2.0, 0.5, -0.3, 1.1), Point::new(1.0, -2.0)).unwrap();
        let x = Point::new(0.2, 0.7);
        assert!((m.to_reference(m.to_physical(x)) - x).norm() < 1e-15);
    }
}
