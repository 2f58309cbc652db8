use nalgebra::{DMatrix, DVector};

use super::dofmap::{DofPartition, Slot};
use super::sparse::{csr_from_triplets, CsrExt, CsrMatrix};
use super::space::FeSpace;
use crate::error::{Error, Result};
use crate::quadrature::{LumpedQuadRule, OracleRule};

/// Mesh quadrature point a mass block belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadPoint {
    Vertex(usize),
    Midpoint(usize),
}

#[derive(Clone, Debug)]
pub struct MassBlock {
    pub point: QuadPoint,
    pub dofs: Vec<usize>,
    pub matrix: DMatrix<f64>,
    /// Row-major lower Cholesky factor.
    factor: Vec<f64>,
}

impl MassBlock {
    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = x.len();
        let l = &self.factor;
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= l[i * n + j] * x[j];
            }
            x[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= l[j * n + i] * x[j];
            }
            x[i] = s / l[i * n + i];
        }
    }
}

/// Block-diagonal mass matrix: one small SPD block per mesh quadrature point.
#[derive(Clone, Debug)]
pub struct BlockDiagMass {
    n_dof: usize,
    blocks: Vec<MassBlock>,
}

impl BlockDiagMass {
    /// Factorizes every block; fails on the first block that is not SPD.
    pub fn from_blocks(n_dof: usize, blocks: Vec<(QuadPoint, Vec<usize>, DMatrix<f64>)>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (b, (point, dofs, matrix)) in blocks.into_iter().enumerate() {
            let n = dofs.len();
            if n == 0 {
                continue;
            }
            let sym = (&matrix - matrix.transpose()).amax();
            if sym > 1e-12 * matrix.amax() {
                return Err(Error::NonSpdBlock { block: b });
            }
            let chol = matrix.clone().cholesky().ok_or(Error::NonSpdBlock { block: b })?;
            let l = chol.l();
            let factor = (0..n * n).map(|i| l[(i / n, i % n)]).collect();
            out.push(MassBlock { point, dofs, matrix, factor });
        }
        Ok(Self { n_dof, blocks: out })
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn blocks(&self) -> &[MassBlock] {
        &self.blocks
    }

    /// Number of stored matrix entries.
    pub fn stored_entries(&self) -> usize {
        self.blocks.iter().map(|b| b.dim() * b.dim()).sum()
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for b in &self.blocks {
            for (i, &di) in b.dofs.iter().enumerate() {
                let mut acc = 0.0;
                for (j, &dj) in b.dofs.iter().enumerate() {
                    acc += b.matrix[(i, j)] * x[dj];
                }
                y[di] += acc;
            }
        }
    }

    pub fn mul(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n_dof);
        self.mul_into(x.as_slice(), y.as_mut_slice());
        y
    }

    /// `x = M^{-1} r`, block by block with the stored factors.
    pub fn solve_into(&self, r: &[f64], x: &mut [f64]) {
        let mut buf = [0.0; 32];
        for b in &self.blocks {
            let n = b.dim();
            let mut heap;
            let work: &mut [f64] = if n <= buf.len() {
                &mut buf[..n]
            } else {
                heap = vec![0.0; n];
                &mut heap
            };
            for (w, &d) in work.iter_mut().zip(&b.dofs) {
                *w = r[d];
            }
            b.solve_in_place(work);
            for (w, &d) in work.iter().zip(&b.dofs) {
                x[d] = *w;
            }
        }
    }

    pub fn solve(&self, r: &DVector<f64>) -> DVector<f64> {
        let mut x = DVector::zeros(self.n_dof);
        self.solve_into(r.as_slice(), x.as_mut_slice());
        x
    }

    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&self.mul(x))
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut trip = Vec::with_capacity(self.stored_entries());
        for b in &self.blocks {
            for (i, &di) in b.dofs.iter().enumerate() {
                for (j, &dj) in b.dofs.iter().enumerate() {
                    trip.push((di, dj, b.matrix[(i, j)]));
                }
            }
        }
        csr_from_triplets(self.n_dof, self.n_dof, &trip)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.to_csr().to_dense()
    }

    /// Principal submatrix on the free DOFs (renumbered), refactorized.
    pub fn restrict_free(&self, part: &DofPartition) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let keep: Vec<usize> = (0..b.dim()).filter(|&i| matches!(part.slot(b.dofs[i]), Slot::Free(_))).collect();
            if keep.is_empty() {
                continue;
            }
            let dofs = keep
                .iter()
                .map(|&i| match part.slot(b.dofs[i]) {
                    Slot::Free(f) => f,
                    Slot::Constrained(_) => unreachable!(),
                })
                .collect();
            let m = DMatrix::from_fn(keep.len(), keep.len(), |i, j| b.matrix[(keep[i], keep[j])]);
            blocks.push((b.point, dofs, m));
        }
        Self::from_blocks(part.free.len(), blocks)
    }

    /// Coupling block `M_FB` (free rows, constrained columns).
    pub fn coupling(&self, part: &DofPartition) -> CsrMatrix {
        self.to_csr().select(&part.free_map(), part.free.len(), &part.constrained_map(), part.constrained.len())
    }
}

/// Lumped mass from the vertex+midpoint rule.
///
/// Vertex blocks couple the normal-velocity DOFs of all edges meeting at the vertex;
/// midpoint blocks hold the two interior DOFs of a cell.
pub fn assemble_lumped_mass(space: &FeSpace) -> Result<BlockDiagMass> {
    let mesh = &space.mesh;
    let mut vertex_blocks: Vec<(Vec<usize>, DMatrix<f64>)> = (0..mesh.n_vertices())
        .map(|v| {
            let dofs: Vec<usize> = mesh.vertex_edges(v).iter().map(|&e| space.dofmap.edge_dof(mesh, e, v)).collect();
            let n = dofs.len();
            (dofs, DMatrix::zeros(n, n))
        })
        .collect();
    let mut midpoint_blocks = Vec::with_capacity(mesh.n_cells());

    for (c, el) in space.elements.iter().enumerate() {
        let cell_dofs = space.dofmap.cell_dofs(c);
        let nv = el.shape.n_vertices();
        for blk in el.local_mass_lumped()? {
            let g = [cell_dofs[blk.slots[0]], cell_dofs[blk.slots[1]]];
            if blk.quad_point == nv {
                midpoint_blocks.push((QuadPoint::Midpoint(c), g.to_vec(), DMatrix::from_iterator(2, 2, blk.matrix.iter().copied())));
                continue;
            }
            let v = mesh.cell(c).vertices()[blk.quad_point];
            let (dofs, m) = &mut vertex_blocks[v];
            let pos = g.map(|d| dofs.iter().position(|&x| x == d).expect("edge dof incident to vertex"));
            for i in 0..2 {
                for j in 0..2 {
                    m[(pos[i], pos[j])] += blk.matrix[(i, j)];
                }
            }
        }
    }

    let blocks = vertex_blocks
        .into_iter()
        .enumerate()
        .map(|(v, (d, m))| (QuadPoint::Vertex(v), d, m))
        .chain(midpoint_blocks)
        .collect();
    BlockDiagMass::from_blocks(space.n_dof(), blocks)
}

fn scatter(space: &FeSpace, local: impl Fn(usize) -> DMatrix<f64>) -> CsrMatrix {
    let mut trip = Vec::new();
    for c in 0..space.mesh.n_cells() {
        let dofs = space.dofmap.cell_dofs(c);
        let m = local(c);
        for (i, &di) in dofs.iter().enumerate() {
            for (j, &dj) in dofs.iter().enumerate() {
                trip.push((di, dj, m[(i, j)]));
            }
        }
    }
    csr_from_triplets(space.n_dof(), space.n_dof(), &trip)
}

/// `(psi_i, psi_j)_h` for every global pair, by direct elementwise quadrature.
pub fn assemble_lumped_mass_direct(space: &FeSpace) -> CsrMatrix {
    scatter(space, |c| {
        let el = &space.elements[c];
        el.local_mass_full(&LumpedQuadRule::new(el.shape))
    })
}

/// Exact (consistent) mass `(psi_i, psi_j)` with the degree-6 oracle rule.
pub fn assemble_consistent_mass(space: &FeSpace) -> CsrMatrix {
    let rules = oracle_pair();
    scatter(space, |c| {
        let el = &space.elements[c];
        el.local_mass_oracle(rule_for(&rules, el.shape))
    })
}

/// Div-div stiffness, integrated with the lumped rule (exact for these integrands).
pub fn assemble_stiffness(space: &FeSpace) -> CsrMatrix {
    scatter(space, |c| space.elements[c].local_stiffness())
}

pub fn assemble_stiffness_oracle(space: &FeSpace) -> CsrMatrix {
    let rules = oracle_pair();
    scatter(space, |c| {
        let el = &space.elements[c];
        el.local_stiffness_oracle(rule_for(&rules, el.shape))
    })
}

fn oracle_pair() -> [OracleRule; 2] {
    use crate::mesh::Shape;
    [OracleRule::degree6(Shape::Triangle), OracleRule::degree6(Shape::Parallelogram)]
}

fn rule_for(rules: &[OracleRule; 2], shape: crate::mesh::Shape) -> &OracleRule {
    match shape {
        crate::mesh::Shape::Triangle => &rules[0],
        crate::mesh::Shape::Parallelogram => &rules[1],
    }
}
