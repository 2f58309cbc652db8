//! Error norms, quadrature-error functionals and convergence rates.

mod eoc;
mod errors;
mod interpolation;
mod sigma;

pub use eoc::{eoc, mean_rate};
pub use errors::{discrete_error, energy_error, error_rule, ErrorReport};
pub use interpolation::{commuting_defect, interpolation_error, normal_trace_mismatch};
pub use sigma::{sigma_cell, sigma_h, sigma_p1_stats, SigmaStats};

pub use crate::quadrature::OracleRule;
