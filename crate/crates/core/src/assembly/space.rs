use nalgebra::{DVector, Vector2};

use super::dofmap::{build_dofmap, DofMap};
use crate::error::Result;
use crate::felement::LocalElement;
use crate::mesh::{HybridMesh, Point};

/// Mesh, local elements and global numbering of the space `V_h` (RT1 / BDFM2 per cell).
#[derive(Clone, Debug)]
pub struct FeSpace {
    pub mesh: HybridMesh,
    pub dofmap: DofMap,
    pub elements: Vec<LocalElement>,
}

impl FeSpace {
    pub fn new(mesh: HybridMesh) -> Result<Self> {
        let elements = (0..mesh.n_cells()).map(|c| LocalElement::new(&mesh, c)).collect::<Result<Vec<_>>>()?;
        let dofmap = build_dofmap(&mesh, &elements);
        Ok(Self { mesh, dofmap, elements })
    }

    pub fn n_dof(&self) -> usize {
        self.dofmap.n_dof()
    }

    /// Local coefficients of a global vector on cell `c`.
    pub fn local_coeffs(&self, global: &DVector<f64>, c: usize) -> Vec<f64> {
        self.dofmap.cell_dofs(c).iter().map(|&d| global[d]).collect()
    }

    /// Global canonical interpolant `Pi_h u`.
    ///
    /// Edge DOFs depend only on the trace of `u` on the edge, so neighbouring cells
    /// agree; the value from the lowest-numbered cell is kept.
    pub fn interpolate(&self, u: impl Fn(Point) -> Vector2<f64>) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.n_dof());
        let mut set = vec![false; self.n_dof()];
        for (c, el) in self.elements.iter().enumerate() {
            let local = el.interpolate(&u)?;
            for (k, &d) in self.dofmap.cell_dofs(c).iter().enumerate() {
                if !set[d] {
                    out[d] = local[k];
                    set[d] = true;
                }
            }
        }
        Ok(out)
    }

    /// Value and divergence of a discrete field at a point given in cell `c`'s reference coordinates.
    pub fn eval_reference(&self, coeffs: &DVector<f64>, c: usize, p_ref: Point) -> (Vector2<f64>, f64) {
        self.elements[c].field_reference(&self.local_coeffs(coeffs, c), p_ref)
    }
}
