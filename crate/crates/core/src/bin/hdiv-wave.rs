use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdiv_wave::cli::{self, RunConfig, VerifyOptions};

#[derive(Parser)]
#[command(version, about = "Mass-lumped H(div) wave solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the benchmark on one mesh and write energy, errors and snapshots.
    Run(Settings),
    /// Solve on every level of a mesh family and write the convergence table.
    Convergence(Settings),
    /// Run the property suite.
    Verify {
        /// Triangle vertex weight to use instead of 1/12 (negative control).
        #[arg(long)]
        debug_beta: Option<f64>,
    },
    /// Write the selected mesh as text and CSV.
    ExportMesh(Settings),
}

/// Flags mirror the config-file keys; a flag overrides the file.
#[derive(Args)]
struct Settings {
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// structured-triangle | structured-quad | hybrid | perturbed
    #[arg(long)]
    mesh_family: Option<String>,
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    base_divisions: Option<String>,
    #[arg(long)]
    perturbation: Option<String>,
    /// Time step, or `auto` for the estimated stability bound.
    #[arg(long)]
    tau: Option<String>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<String>,
    #[arg(long)]
    damping: Option<String>,
    /// planewave | zero
    #[arg(long)]
    benchmark: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[arg(long)]
    snapshot_every: Option<String>,
    #[arg(long)]
    mesh_file: Option<String>,
    #[arg(long)]
    dump_matrices: bool,
    #[arg(long)]
    assert: bool,
}

impl Settings {
    fn resolve(&self) -> hdiv_wave::Result<RunConfig> {
        let mut pairs = match &self.config {
            Some(path) => cli::read_config(path)?,
            None => Vec::new(),
        };
        let flags = [
            ("mesh-family", &self.mesh_family),
            ("levels", &self.levels),
            ("base-divisions", &self.base_divisions),
            ("perturbation", &self.perturbation),
            ("tau", &self.tau),
            ("T", &self.t_final),
            ("damping", &self.damping),
            ("benchmark", &self.benchmark),
            ("out-dir", &self.out_dir),
            ("snapshot-every", &self.snapshot_every),
            ("mesh-file", &self.mesh_file),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.push((key.to_string(), v.clone()));
            }
        }
        if self.dump_matrices {
            pairs.push(("dump-matrices".into(), "true".into()));
        }
        if self.assert {
            pairs.push(("assert".into(), "true".into()));
        }
        RunConfig::from_pairs(pairs)
    }
}

fn execute(command: Command) -> hdiv_wave::Result<bool> {
    match command {
        Command::Run(s) => {
            let cfg = s.resolve()?;
            let out = cli::cmd_run(&cfg)?;
            let r = out.report;
            println!("h = {}, dofs = {}, steps = {}, tau = {} (tau_max {:.3e})", r.h, out.n_dof, out.n_steps, out.tau, out.stability.tau_max);
            println!("energy error {:.6e}, discrete error {:.6e}", r.energy_error, r.discrete_error);
            println!("wrote {}", cfg.out_dir.display());
            Ok(true)
        }
        Command::Convergence(s) => {
            let cfg = s.resolve()?;
            let rows = cli::cmd_convergence(&cfg)?;
            cli::write_convergence_csv(&rows, std::io::stdout().lock())?;
            Ok(true)
        }
        Command::Verify { debug_beta } => {
            let checks = cli::cmd_verify(&VerifyOptions { triangle_beta: debug_beta })?;
            for c in &checks {
                println!("{c}");
            }
            Ok(checks.iter().all(|c| c.passed))
        }
        Command::ExportMesh(s) => {
            let cfg = s.resolve()?;
            let mesh = cli::cmd_export_mesh(&cfg)?;
            println!("{} vertices, {} cells -> {}", mesh.n_vertices(), mesh.n_cells(), cfg.out_dir.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
