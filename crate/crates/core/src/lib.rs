//! Mass-lumped H(div) finite elements on hybrid triangle/parallelogram meshes
//! with explicit leapfrog time stepping for the damped wave equation
//! `u_tt + d u_t - grad div u = 0`.

pub mod analysis;
pub mod assembly;
pub mod benchmark;
pub mod cli;
pub mod error;
pub mod felement;
pub mod mesh;
pub mod quadrature;
pub mod simulation;
pub mod timeloop;

pub use error::{Error, Result};
