//! Quadrature rules on the reference cells.
//!
//! Reference triangle: `(0,0), (1,0), (0,1)`. Reference square: `[0,1]^2`
//! with vertices `(0,0), (1,0), (1,1), (0,1)`.

use crate::error::{Error, Result};
use crate::mesh::{Point, Shape};

pub fn reference_vertices(shape: Shape) -> &'static [[f64; 2]] {
    match shape {
        Shape::Triangle => &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        Shape::Parallelogram => &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
    }
}

pub fn reference_midpoint(shape: Shape) -> Point {
    match shape {
        Shape::Triangle => Point::new(1.0 / 3.0, 1.0 / 3.0),
        Shape::Parallelogram => Point::new(0.5, 0.5),
    }
}

pub fn reference_area(shape: Shape) -> f64 {
    match shape {
        Shape::Triangle => 0.5,
        Shape::Parallelogram => 1.0,
    }
}

/// Exact integral of `x^a y^b` over the reference cell.
pub fn reference_monomial_integral(shape: Shape, a: u32, b: u32) -> f64 {
    match shape {
        // a! b! / (a + b + 2)!
        Shape::Triangle => {
            let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
            fact(a) * fact(b) / fact(a + b + 2)
        }
        Shape::Parallelogram => 1.0 / (f64::from(a + 1) * f64::from(b + 1)),
    }
}

/// Vertex + midpoint rule `|K| (alpha u(m) + beta sum_i u(v_i))`.
///
/// Quadrature points are indexed vertices first (in cell order), then the midpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LumpedQuadRule {
    pub shape: Shape,
    pub alpha: f64,
    pub beta: f64,
}

impl LumpedQuadRule {
    pub fn new(shape: Shape) -> Self {
        match shape {
            Shape::Triangle => Self { shape, alpha: 3.0 / 4.0, beta: 1.0 / 12.0 },
            Shape::Parallelogram => Self { shape, alpha: 2.0 / 3.0, beta: 1.0 / 12.0 },
        }
    }

    pub fn with_weights(shape: Shape, alpha: f64, beta: f64) -> Self {
        Self { shape, alpha, beta }
    }

    pub fn n_points(&self) -> usize {
        self.shape.n_vertices() + 1
    }

    pub fn midpoint_index(&self) -> usize {
        self.shape.n_vertices()
    }

    pub fn points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> =
            reference_vertices(self.shape).iter().map(|v| Point::new(v[0], v[1])).collect();
        pts.push(reference_midpoint(self.shape));
        pts
    }

    /// Weights relative to the cell area (they sum to one for the default rules).
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.beta; self.shape.n_vertices()];
        w.push(self.alpha);
        w
    }

    /// Applies the rule to a scalar function on the reference cell.
    pub fn integrate_reference(&self, f: impl Fn(Point) -> f64) -> f64 {
        let area = reference_area(self.shape);
        self.points().into_iter().zip(self.weights()).map(|(p, w)| w * f(p)).sum::<f64>() * area
    }

    /// Largest relative error over all monomials of total degree `<= max_degree`.
    pub fn exactness_defect(&self, max_degree: u32) -> f64 {
        monomial_defect(self.shape, max_degree, |f| self.integrate_reference(f))
    }
}

/// Largest relative error of `integrate` over the monomials `x^a y^b`, `a + b <= max_degree`,
/// on the reference cell.
pub fn monomial_defect(shape: Shape, max_degree: u32, integrate: impl Fn(&dyn Fn(Point) -> f64) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for d in 0..=max_degree {
        for a in 0..=d {
            let b = d - a;
            let exact = reference_monomial_integral(shape, a, b);
            let q = integrate(&|p: Point| p.x.powi(a as i32) * p.y.powi(b as i32));
            worst = worst.max((q - exact).abs() / exact.abs());
        }
    }
    worst
}

/// A positive reference rule used as the integration oracle.
#[derive(Clone, Debug)]
pub struct OracleRule {
    pub shape: Shape,
    pub points: Vec<Point>,
    /// Weights on the reference cell (summing to the reference area).
    pub weights: Vec<f64>,
    pub degree: u32,
}

// Symmetric 12-point degree-6 rule on the triangle (Dunavant), weights normalized to unit area.
const DUNAVANT6: [(f64, [f64; 3], u8); 3] = [
    (0.116_786_275_726_379, [0.249_286_745_170_910, 0.249_286_745_170_910, 0.501_426_509_658_179], 3),
    (0.050_844_906_370_207, [0.063_089_014_491_502, 0.063_089_014_491_502, 0.873_821_971_016_996], 3),
    (0.082_851_075_618_374, [0.053_145_049_844_817, 0.310_352_451_033_784, 0.636_502_499_121_399], 6),
];

impl OracleRule {
    /// Degree-6 rule: Dunavant 12-point on the triangle, 4x4 Gauss on the square.
    pub fn degree6(shape: Shape) -> Self {
        match shape {
            Shape::Triangle => {
                let mut points = Vec::with_capacity(12);
                let mut weights = Vec::with_capacity(12);
                for (w, b, orbit) in DUNAVANT6 {
                    let perms: &[[usize; 3]] = if orbit == 3 {
                        &[[0, 1, 2], [1, 2, 0], [2, 0, 1]]
                    } else {
                        &[[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]]
                    };
                    for p in perms {
                        // barycentric (l0, l1, l2) -> (x, y) = (l1, l2)
                        points.push(Point::new(b[p[1]], b[p[2]]));
                        weights.push(0.5 * w);
                    }
                }
                Self { shape, points, weights, degree: 6 }
            }
            Shape::Parallelogram => Self::gauss(shape, 4),
        }
    }

    /// Tensor Gauss rule with `n` points per direction; collapsed (Duffy) on the triangle.
    ///
    /// Exact to degree `2n - 1` on the square and `2n - 2` on the triangle.
    pub fn gauss(shape: Shape, n: usize) -> Self {
        let (x, w) = gauss_legendre_unit(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                match shape {
                    Shape::Parallelogram => {
                        points.push(Point::new(x[i], x[j]));
                        weights.push(w[i] * w[j]);
                    }
                    Shape::Triangle => {
                        // (s, t) in [0,1]^2 -> (s, t (1 - s)), Jacobian (1 - s)
                        points.push(Point::new(x[i], x[j] * (1.0 - x[i])));
                        weights.push(w[i] * w[j] * (1.0 - x[i]));
                    }
                }
            }
        }
        let degree = match shape {
            Shape::Parallelogram => 2 * n as u32 - 1,
            Shape::Triangle => 2 * n as u32 - 2,
        };
        Self { shape, points, weights, degree }
    }

    pub fn integrate_reference(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }

    /// Largest relative error over all monomials of total degree `<= max_degree`.
    pub fn exactness_defect(&self, max_degree: u32) -> f64 {
        monomial_defect(self.shape, max_degree, |f| self.integrate_reference(f))
    }

    /// Startup self-test: the rule must integrate monomials up to its nominal degree.
    pub fn checked(self) -> Result<Self> {
        if self.weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::PropertyViolation("oracle rule has non-positive weights".into()));
        }
        let defect = self.exactness_defect(self.degree);
        if defect > 1e-13 {
            return Err(Error::PropertyViolation(format!(
                "oracle rule not exact to degree {} (defect {defect:.2e})",
                self.degree
            )));
        }
        Ok(self)
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton iteration on P_n from the Chebyshev-like initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * wi;
        w[n - 1 - i] = 0.5 * wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lumped_weights_sum_to_one() {
        for shape in [Shape::Triangle, Shape::Parallelogram] {
            let r = LumpedQuadRule::new(shape);
            assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert_eq!(LumpedQuadRule::new(Shape::Triangle).alpha, 0.75);
        assert_eq!(LumpedQuadRule::new(Shape::Parallelogram).alpha, 2.0 / 3.0);
    }

    #[test]
    fn oracle_rules_pass_self_test() {
        for shape in [Shape::Triangle, Shape::Parallelogram] {
            let r = OracleRule::degree6(shape).checked().unwrap();
            assert!(r.exactness_defect(6) < 1e-13);
            for n in [2, 5, 8, 12] {
                OracleRule::gauss(shape, n).checked().unwrap();
            }
        }
    }

    #[test]
    fn degree6_rule_is_not_degree8() {
        assert!(OracleRule::degree6(Shape::Triangle).exactness_defect(8) > 1e-8);
    }

    #[test]
    fn gauss_legendre_three_points() {
        let (x, w) = gauss_legendre_unit(3);
        let s = (0.6f64).sqrt();
        assert!((x[0] - 0.5 * (1.0 - s)).abs() < 1e-15);
        assert!((x[1] - 0.5).abs() < 1e-15);
        assert!((w[1] - 4.0 / 9.0).abs() < 1e-15);
        assert!((w[0] - 5.0 / 18.0).abs() < 1e-15);
    }
}
