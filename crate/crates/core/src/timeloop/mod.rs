//! Explicit leapfrog integration of `M u'' + d M u' + K u = rhs` with a block-diagonal `M`.

mod leapfrog;
mod stability;

pub use leapfrog::{EnergySample, EnergyTrace, HomogeneousData, Leapfrog, WaveState};
pub use stability::{stable_tau, PowerIteration, StabilityEstimate};
