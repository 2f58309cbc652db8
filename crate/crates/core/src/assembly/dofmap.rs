use nalgebra::DVector;

use crate::felement::{BasisTag, LocalElement};
use crate::mesh::HybridMesh;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofKind {
    /// Normal velocity `u . n_e` of edge `edge` at its endpoint `vertex`.
    EdgeEndpoint { edge: usize, vertex: usize },
    /// Cartesian velocity component `slot` at the midpoint of `cell`.
    Interior { cell: usize, slot: usize },
}

/// Global numbering: edge `e` owns DOFs `2e` (at its lower vertex) and `2e + 1`
/// (at its higher vertex); cell `c` owns `2 n_edges + 2c` and `2 n_edges + 2c + 1`.
#[derive(Clone, Debug)]
pub struct DofMap {
    n_edges: usize,
    n_cells: usize,
    cell_dofs: Vec<Vec<usize>>,
    constrained: Vec<bool>,
}

impl DofMap {
    pub fn n_dof(&self) -> usize {
        2 * self.n_edges + 2 * self.n_cells
    }

    pub fn edge_dof(&self, mesh: &HybridMesh, edge: usize, vertex: usize) -> usize {
        let [lo, hi] = mesh.edge(edge);
        debug_assert!(vertex == lo || vertex == hi);
        2 * edge + usize::from(vertex == hi)
    }

    pub fn interior_dof(&self, cell: usize, slot: usize) -> usize {
        2 * self.n_edges + 2 * cell + slot
    }

    pub fn kind(&self, mesh: &HybridMesh, dof: usize) -> DofKind {
        if dof < 2 * self.n_edges {
            let edge = dof / 2;
            let vertex = mesh.edge(edge)[dof % 2];
            DofKind::EdgeEndpoint { edge, vertex }
        } else {
            let i = dof - 2 * self.n_edges;
            DofKind::Interior { cell: i / 2, slot: i % 2 }
        }
    }

    /// Local basis slot to global DOF for cell `c`.
    pub fn cell_dofs(&self, c: usize) -> &[usize] {
        &self.cell_dofs[c]
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.constrained[dof]
    }

    pub fn partition(&self) -> DofPartition {
        DofPartition::new(&self.constrained)
    }
}

pub fn build_dofmap(mesh: &HybridMesh, elements: &[LocalElement]) -> DofMap {
    let n_edges = mesh.n_edges();
    let mut cell_dofs = Vec::with_capacity(mesh.n_cells());
    for (c, el) in elements.iter().enumerate() {
        let verts = mesh.cell(c).vertices();
        let dofs = (0..el.dim())
            .map(|k| match el.tag(k) {
                BasisTag::Vertex { edge, vertex } => {
                    let e = el.edge(edge);
                    2 * e + usize::from(verts[vertex] == mesh.edge(e)[1])
                }
                BasisTag::Interior { slot } => 2 * n_edges + 2 * c + slot,
            })
            .collect();
        cell_dofs.push(dofs);
    }
    let mut constrained = vec![false; 2 * n_edges + 2 * mesh.n_cells()];
    for &e in mesh.boundary_edges() {
        constrained[2 * e] = true;
        constrained[2 * e + 1] = true;
    }
    DofMap { n_edges, n_cells: mesh.n_cells(), cell_dofs, constrained }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Free(usize),
    Constrained(usize),
}

/// Split of the global DOFs into free and constrained (boundary) sets.
#[derive(Clone, Debug)]
pub struct DofPartition {
    pub free: Vec<usize>,
    pub constrained: Vec<usize>,
    slots: Vec<Slot>,
}

impl DofPartition {
    pub fn new(constrained_mask: &[bool]) -> Self {
        let mut free = Vec::new();
        let mut constrained = Vec::new();
        let slots = constrained_mask
            .iter()
            .enumerate()
            .map(|(d, &c)| {
                if c {
                    constrained.push(d);
                    Slot::Constrained(constrained.len() - 1)
                } else {
                    free.push(d);
                    Slot::Free(free.len() - 1)
                }
            })
            .collect();
        Self { free, constrained, slots }
    }

    pub fn n_dof(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, dof: usize) -> Slot {
        self.slots[dof]
    }

    pub fn free_map(&self) -> Vec<Option<usize>> {
        self.slots.iter().map(|s| if let Slot::Free(i) = *s { Some(i) } else { None }).collect()
    }

    pub fn constrained_map(&self) -> Vec<Option<usize>> {
        self.slots.iter().map(|s| if let Slot::Constrained(i) = *s { Some(i) } else { None }).collect()
    }

    pub fn free_part(&self, full: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.free.len(), self.free.iter().map(|&d| full[d]))
    }

    pub fn constrained_part(&self, full: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.constrained.len(), self.constrained.iter().map(|&d| full[d]))
    }

    pub fn join(&self, free: &DVector<f64>, constrained: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.n_dof(),
            self.slots.iter().map(|s| match *s {
                Slot::Free(i) => free[i],
                Slot::Constrained(i) => constrained[i],
            }),
        )
    }
}
