use nalgebra::{DVector, Vector2};

use super::dofmap::{DofKind, DofPartition};
use super::mass::BlockDiagMass;
use super::sparse::{CsrExt, CsrMatrix};
use super::space::FeSpace;
use crate::error::Result;
use crate::mesh::Point;

/// Boundary values `g_B(t)`: the normal component `g(p, t) . n_e` at every
/// constrained edge-endpoint DOF, in the partition's constrained order.
pub fn constrain(
    space: &FeSpace,
    part: &DofPartition,
    g: impl Fn(Point, f64) -> Vector2<f64>,
    t: f64,
) -> DVector<f64> {
    let mesh = &space.mesh;
    DVector::from_iterator(
        part.constrained.len(),
        part.constrained.iter().map(|&d| match space.dofmap.kind(mesh, d) {
            DofKind::EdgeEndpoint { edge, vertex } => g(mesh.vertex(vertex), t).dot(&mesh.edge_normal(edge)),
            DofKind::Interior { .. } => unreachable!("interior DOFs are never constrained"),
        }),
    )
}

/// Mass and stiffness split into free/free and free/constrained couplings.
#[derive(Clone, Debug)]
pub struct SplitOperators {
    pub partition: DofPartition,
    pub m_ff: BlockDiagMass,
    pub m_fb: CsrMatrix,
    pub k_ff: CsrMatrix,
    pub k_fb: CsrMatrix,
}

impl SplitOperators {
    pub fn new(mass: &BlockDiagMass, stiffness: &CsrMatrix, partition: DofPartition) -> Result<Self> {
        let (fm, cm) = (partition.free_map(), partition.constrained_map());
        let (nf, nc) = (partition.free.len(), partition.constrained.len());
        Ok(Self {
            m_ff: mass.restrict_free(&partition)?,
            m_fb: mass.coupling(&partition),
            k_ff: stiffness.select(&fm, nf, &fm, nf),
            k_fb: stiffness.select(&fm, nf, &cm, nc),
            partition,
        })
    }

    pub fn n_free(&self) -> usize {
        self.partition.free.len()
    }

    pub fn n_constrained(&self) -> usize {
        self.partition.constrained.len()
    }
}
