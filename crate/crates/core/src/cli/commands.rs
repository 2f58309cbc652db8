use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::analysis::{eoc, mean_rate, ErrorReport};
use crate::assembly::CsrExt;
use crate::error::{Error, Result};
use crate::mesh::{generate, HybridMesh};
use crate::simulation::{simulate, Discretization, RunOutcome, SimOptions};

use super::config::RunConfig;
use super::snapshot::GridSampler;

/// Samples per direction of the snapshot grid.
pub const SNAPSHOT_GRID: usize = 100;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// The mesh a single run works on: `mesh-file` if given, else the finest family level.
/// Returns the mesh with its nominal size.
pub fn load_mesh(cfg: &RunConfig) -> Result<(HybridMesh, f64)> {
    match &cfg.mesh_file {
        Some(path) => {
            let mesh = HybridMesh::read_text(BufReader::new(File::open(path)?))?;
            let h = mesh.h_max();
            Ok((mesh, h))
        }
        None => {
            let family = cfg.family();
            let level = cfg.levels - 1;
            Ok((generate(&family, level)?, family.nominal_h(level)))
        }
    }
}

/// Writes `mass.csv` (lumped) and `stiffness.csv` in coordinate format.
pub fn dump_matrices(disc: &Discretization, dir: &Path) -> Result<()> {
    disc.mass.to_csr().write_coo(create(&dir.join("mass.csv"))?)?;
    disc.stiffness.write_coo(create(&dir.join("stiffness.csv"))?)?;
    Ok(())
}

fn write_report(report: &ErrorReport, out: &RunOutcome, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "h,n_dof,n_steps,tau,tau_max,velocity_error,div_error,energy_error,discrete_error")?;
    writeln!(
        w,
        "{},{},{},{},{},{:e},{:e},{:e},{:e}",
        report.h,
        out.n_dof,
        out.n_steps,
        out.tau,
        out.stability.tau_max,
        report.velocity_error,
        report.div_error,
        report.energy_error,
        report.discrete_error
    )?;
    Ok(())
}

/// Solves the configured benchmark once and writes `energy.csv`, `errors.csv`
/// and, if enabled, `snapshots/u1_<step>.csv`.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let (mesh, h) = load_mesh(cfg)?;
    let disc = Discretization::new(mesh)?;
    if cfg.dump_matrices {
        dump_matrices(&disc, &cfg.out_dir)?;
    }
    let snap_dir = cfg.out_dir.join("snapshots");
    let sampler = if cfg.snapshot_every > 0 {
        fs::create_dir_all(&snap_dir)?;
        Some(GridSampler::new(&disc.space, SNAPSHOT_GRID))
    } else {
        None
    };
    let opts = cfg.sim_options();
    let out = simulate(&disc, h, &opts, |step, _t, u| {
        if let Some(s) = &sampler {
            if step % cfg.snapshot_every == 0 {
                let values = s.sample_first_component(&disc.space, u);
                s.write_csv(&values, create(&snap_dir.join(format!("u1_{step:06}.csv")))?)?;
            }
        }
        Ok(())
    })?;
    out.energy.write_csv(create(&cfg.out_dir.join("energy.csv"))?)?;
    write_report(&out.report, &out, &cfg.out_dir.join("errors.csv"))?;
    Ok(out)
}

/// One row of the convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub report: ErrorReport,
    pub eoc_energy: Option<f64>,
    pub eoc_discrete: Option<f64>,
}

/// Runs every level of the family with the given options.
pub fn convergence_study(cfg: &RunConfig, opts: &SimOptions) -> Result<Vec<ConvergenceRow>> {
    let family = cfg.family();
    let mut reports = Vec::with_capacity(cfg.levels);
    for level in 0..cfg.levels {
        let disc = Discretization::new(generate(&family, level)?)?;
        let out = simulate(&disc, family.nominal_h(level), opts, |_, _, _| Ok(()))?;
        reports.push(out.report);
    }
    let energy = eoc(&reports.iter().map(|r| (r.h, r.energy_error)).collect::<Vec<_>>());
    let discrete = eoc(&reports.iter().map(|r| (r.h, r.discrete_error)).collect::<Vec<_>>());
    Ok(reports
        .into_iter()
        .zip(energy.into_iter().zip(discrete))
        .map(|(report, (eoc_energy, eoc_discrete))| ConvergenceRow { report, eoc_energy, eoc_discrete })
        .collect())
}

pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], mut out: W) -> std::io::Result<()> {
    let fmt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
    writeln!(out, "h,energy_error,discrete_error,eoc_energy,eoc_discrete")?;
    for row in rows {
        writeln!(
            out,
            "{},{:.6e},{:.6e},{},{}",
            row.report.h,
            row.report.energy_error,
            row.report.discrete_error,
            fmt(row.eoc_energy),
            fmt(row.eoc_discrete)
        )?;
    }
    Ok(())
}

/// Mean rates `(energy, discrete)` of a table.
pub fn mean_rates(rows: &[ConvergenceRow]) -> (Option<f64>, Option<f64>) {
    let e: Vec<_> = rows.iter().map(|r| r.eoc_energy).collect();
    let d: Vec<_> = rows.iter().map(|r| r.eoc_discrete).collect();
    (mean_rate(&e), mean_rate(&d))
}

/// Minimum mean rate required by `convergence --assert`.
pub const MIN_MEAN_EOC: f64 = 1.8;

/// Runs all levels, writes `convergence.csv`, and with `assert` set fails
/// unless both mean rates reach [`MIN_MEAN_EOC`].
pub fn cmd_convergence(cfg: &RunConfig) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let rows = convergence_study(cfg, &cfg.sim_options())?;
    write_convergence_csv(&rows, create(&cfg.out_dir.join("convergence.csv"))?)?;
    if cfg.assert {
        let (e, d) = mean_rates(&rows);
        let ok = |r: Option<f64>| r.is_some_and(|v| v >= MIN_MEAN_EOC);
        if !(ok(e) && ok(d)) {
            let list = |f: fn(&ConvergenceRow) -> Option<f64>| {
                rows.iter().map(|r| f(r).map_or("-".to_string(), |v| format!("{v:.3}"))).collect::<Vec<_>>().join(", ")
            };
            return Err(Error::Assertion(format!(
                "mean EOC below {MIN_MEAN_EOC}: energy [{}], discrete [{}]",
                list(|r| r.eoc_energy),
                list(|r| r.eoc_discrete)
            )));
        }
    }
    Ok(rows)
}

/// Writes `mesh.txt` (readable with `mesh-file`), `vertices.csv` and `cells.csv`.
pub fn cmd_export_mesh(cfg: &RunConfig) -> Result<HybridMesh> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let (mesh, _) = load_mesh(cfg)?;
    mesh.write_text(create(&cfg.out_dir.join("mesh.txt"))?)?;
    let mut w = create(&cfg.out_dir.join("vertices.csv"))?;
    writeln!(w, "id,x,y")?;
    for (i, p) in mesh.vertices().iter().enumerate() {
        writeln!(w, "{i},{},{}", p.x, p.y)?;
    }
    let mut w = create(&cfg.out_dir.join("cells.csv"))?;
    writeln!(w, "id,shape,v0,v1,v2,v3")?;
    for (i, cell) in mesh.cells().iter().enumerate() {
        let v = cell.vertices();
        let name = match cell.shape() {
            crate::mesh::Shape::Triangle => "triangle",
            crate::mesh::Shape::Parallelogram => "parallelogram",
        };
        let fourth = v.get(3).map(|x| x.to_string()).unwrap_or_default();
        writeln!(w, "{i},{name},{},{},{},{fourth}", v[0], v[1], v[2])?;
    }
    Ok(mesh)
}
