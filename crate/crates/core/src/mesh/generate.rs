use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cell, HybridMesh, Point};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshKind {
    /// Each grid square split along its rising diagonal.
    StructuredTriangle,
    /// Axis-aligned grid of parallelograms (rectangles).
    StructuredQuad,
    /// Left half of the columns quads, right half triangles.
    Hybrid,
    /// Structured triangles with interior vertices jittered; successive levels are non-nested.
    Perturbed,
}

impl MeshKind {
    pub fn name(self) -> &'static str {
        match self {
            MeshKind::StructuredTriangle => "structured-triangle",
            MeshKind::StructuredQuad => "structured-quad",
            MeshKind::Hybrid => "hybrid",
            MeshKind::Perturbed => "perturbed",
        }
    }
}

impl std::str::FromStr for MeshKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structured-triangle" | "triangle" | "tri" => Ok(MeshKind::StructuredTriangle),
            "structured-quad" | "quad" | "parallelogram" => Ok(MeshKind::StructuredQuad),
            "hybrid" => Ok(MeshKind::Hybrid),
            "perturbed" => Ok(MeshKind::Perturbed),
            other => Err(Error::Config(format!("unknown mesh family '{other}'"))),
        }
    }
}

/// A refinement family of meshes on a rectangular domain.
///
/// Level `l` has `base_divisions * 2^l` cells along the x-axis, so the nominal
/// mesh size is `h0 / 2^l` with `h0 = width / base_divisions`.
#[derive(Clone, Debug)]
pub struct MeshFamily {
    pub kind: MeshKind,
    pub base_divisions: usize,
    /// `[x_min, y_min, x_max, y_max]`.
    pub domain: [f64; 4],
    /// Jitter radius as a fraction of `h` (perturbed kind only).
    pub perturbation: f64,
    pub seed: u64,
}

impl MeshFamily {
    pub fn unit_square(kind: MeshKind, base_divisions: usize) -> Self {
        Self {
            kind,
            base_divisions,
            domain: [0.0, 0.0, 1.0, 1.0],
            perturbation: if kind == MeshKind::Perturbed { 0.2 } else { 0.0 },
            seed: 0x5eed,
        }
    }

    pub fn nominal_h(&self, level: usize) -> f64 {
        (self.domain[2] - self.domain[0]) / self.divisions(level).0 as f64
    }

    fn divisions(&self, level: usize) -> (usize, usize) {
        let nx = self.base_divisions << level;
        let (w, h) = (self.domain[2] - self.domain[0], self.domain[3] - self.domain[1]);
        let ny = ((nx as f64) * h / w).round().max(1.0) as usize;
        (nx, ny)
    }
}

pub fn generate(family: &MeshFamily, level: usize) -> Result<HybridMesh> {
    let [x0, y0, x1, y1] = family.domain;
    if !(x1 > x0 && y1 > y0) || family.base_divisions == 0 {
        return Err(Error::Config(format!("degenerate domain {:?}", family.domain)));
    }
    if !(0.0..0.5).contains(&family.perturbation) {
        return Err(Error::InvalidPerturbation(family.perturbation));
    }
    let (nx, ny) = family.divisions(level);
    let (dx, dy) = ((x1 - x0) / nx as f64, (y1 - y0) / ny as f64);
    let id = |i: usize, j: usize| j * (nx + 1) + i;

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = if i == nx { x1 } else { x0 + i as f64 * dx };
            let y = if j == ny { y1 } else { y0 + j as f64 * dy };
            vertices.push(Point::new(x, y));
        }
    }

    if family.kind == MeshKind::Hybrid && nx < 2 {
        return Err(Error::Config("hybrid meshes need at least two columns".into()));
    }
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let quad = match family.kind {
                MeshKind::StructuredQuad => true,
                MeshKind::Hybrid => i < nx / 2,
                MeshKind::StructuredTriangle | MeshKind::Perturbed => false,
            };
            if quad {
                cells.push(Cell::Parallelogram([a, b, c, d]));
            } else {
                cells.push(Cell::Triangle([a, b, c]));
                cells.push(Cell::Triangle([a, c, d]));
            }
        }
    }

    if family.kind == MeshKind::Perturbed && family.perturbation > 0.0 {
        let h = dx.min(dy);
        let radius = family.perturbation * h;
        let mut rng = ChaCha8Rng::seed_from_u64(family.seed ^ (level as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        for j in 1..ny {
            for i in 1..nx {
                let r = radius * rng.random::<f64>().sqrt();
                let phi = std::f64::consts::TAU * rng.random::<f64>();
                vertices[id(i, j)] += Point::new(r * phi.cos(), r * phi.sin());
            }
        }
    }

    HybridMesh::new(vertices, cells)
}
