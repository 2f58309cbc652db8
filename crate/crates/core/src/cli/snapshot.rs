use std::io::Write;

use nalgebra::DVector;

use crate::assembly::FeSpace;
use crate::mesh::{Point, Shape};

/// Fixed uniform sample points with their containing cells, located once per mesh.
///
/// Points sit at the centres of an `n x n` partition of the mesh bounding box,
/// so none falls on a structured grid line.
#[derive(Clone, Debug)]
pub struct GridSampler {
    pub n: usize,
    pub points: Vec<Point>,
    /// Containing cell and reference coordinates, `None` outside the mesh.
    hits: Vec<Option<(usize, Point)>>,
}

const INSIDE_TOL: f64 = 1e-10;

fn inside_reference(shape: Shape, p: Point) -> bool {
    let lo = -INSIDE_TOL;
    let hi = 1.0 + INSIDE_TOL;
    match shape {
        Shape::Triangle => p.x >= lo && p.y >= lo && p.x + p.y <= hi,
        Shape::Parallelogram => p.x >= lo && p.y >= lo && p.x <= hi && p.y <= hi,
    }
}

impl GridSampler {
    pub fn new(space: &FeSpace, n: usize) -> Self {
        let (lo, hi) = space.mesh.bounding_box();
        let size = hi - lo;
        let points: Vec<Point> = (0..n)
            .flat_map(|j| {
                (0..n).map(move |i| {
                    Point::new(
                        lo.x + size.x * (i as f64 + 0.5) / n as f64,
                        lo.y + size.y * (j as f64 + 0.5) / n as f64,
                    )
                })
            })
            .collect();

        // bucket cells by bounding box on the sample grid
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n * n];
        let to_index = |v: f64, origin: f64, extent: f64| -> usize {
            let t = ((v - origin) / extent * n as f64 - 0.5).floor();
            t.clamp(0.0, (n - 1) as f64) as usize
        };
        for c in 0..space.mesh.n_cells() {
            let pts = space.mesh.cell_points(c);
            let (mut a, mut b) = (pts[0], pts[0]);
            for p in &pts {
                a = a.inf(p);
                b = b.sup(p);
            }
            let (i0, i1) = (to_index(a.x, lo.x, size.x), (to_index(b.x, lo.x, size.x) + 1).min(n - 1));
            let (j0, j1) = (to_index(a.y, lo.y, size.y), (to_index(b.y, lo.y, size.y) + 1).min(n - 1));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * n + i].push(c);
                }
            }
        }
        let hits = points
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                buckets[k].iter().find_map(|&c| {
                    let el = &space.elements[c];
                    let p = el.map.to_reference(x);
                    inside_reference(el.shape, p).then_some((c, p))
                })
            })
            .collect();
        Self { n, points, hits }
    }

    /// First velocity component of `coeffs` at every sample point (`NaN` outside the mesh).
    pub fn sample_first_component(&self, space: &FeSpace, coeffs: &DVector<f64>) -> Vec<f64> {
        self.hits
            .iter()
            .map(|hit| match *hit {
                Some((c, p)) => space.eval_reference(coeffs, c, p).0.x,
                None => f64::NAN,
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, values: &[f64], mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,u1")?;
        for (p, v) in self.points.iter().zip(values) {
            writeln!(out, "{},{},{:e}", p.x, p.y, v)?;
        }
        Ok(())
    }
}
