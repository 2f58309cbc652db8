//! Subcommands behind the `hdiv-wave` binary, usable from code as well.

mod commands;
mod config;
mod snapshot;
mod verify;

pub use commands::{
    cmd_convergence, cmd_export_mesh, cmd_run, convergence_study, dump_matrices, load_mesh, mean_rates,
    write_convergence_csv, ConvergenceRow, MIN_MEAN_EOC, SNAPSHOT_GRID,
};
pub use config::{parse_config, read_config, RunConfig, KEYS};
pub use snapshot::GridSampler;
pub use verify::{cmd_verify, manufactured, manufactured_div, Check, VerifyOptions};
