use std::io;

use thiserror::Error;

/// Errors produced by mesh construction, assembly and time stepping.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("edge ({lo}, {hi}) is shared by {count} cells")]
    NonManifoldEdge { lo: usize, hi: usize, count: usize },

    #[error("cell {cell} is not a parallelogram (defect {defect:.3e} relative to its diameter)")]
    NotParallelogram { cell: usize, defect: f64 },

    #[error("cell {cell} is inverted or degenerate (signed area {area:.3e})")]
    InvertedCell { cell: usize, area: f64 },

    #[error("perturbation {0} must lie in [0, 0.5)")]
    InvalidPerturbation(f64),

    #[error("singular local system: {0}")]
    SingularSystem(String),

    #[error("mass block {block} is not symmetric positive definite")]
    NonSpdBlock { block: usize },

    #[error("non-finite state at step {step} (t = {time}); reduce the time step")]
    Diverged { step: usize, time: f64 },

    #[error("time step {tau} exceeds the stability bound {tau_max}")]
    UnstableStep { tau: f64, tau_max: f64 },

    #[error("{0}")]
    PropertyViolation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
