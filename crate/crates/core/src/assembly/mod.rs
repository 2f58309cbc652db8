//! Global numbering, lumped and consistent mass, div-div stiffness and boundary elimination.

mod constraints;
mod dofmap;
mod mass;
mod space;
mod sparse;

pub use constraints::{constrain, SplitOperators};
pub use dofmap::{build_dofmap, DofKind, DofMap, DofPartition, Slot};
pub use mass::{
    assemble_consistent_mass, assemble_lumped_mass, assemble_lumped_mass_direct, assemble_stiffness,
    assemble_stiffness_oracle, BlockDiagMass, MassBlock, QuadPoint,
};
pub use space::FeSpace;
pub use sparse::{csr_from_triplets, CsrExt, CsrMatrix};
