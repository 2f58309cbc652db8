//! Reference elements, Piola mapping, lumped quadrature and local operators.

mod basis;
mod local;
mod map;
mod splitting;

pub use basis::{BasisEval, BasisTag, ReferenceBasis, MAX_DOFS};
pub use local::{LocalBlock, LocalElement, P1Field};
pub use map::AffineMap;
pub use splitting::{verify_splitting, SplittingReport};
