//! End-to-end benchmark runs: assembly, stability check, stepping, errors.

use nalgebra::{DVector, Vector2};

use crate::analysis::ErrorReport;
use crate::assembly::{assemble_lumped_mass, assemble_stiffness, BlockDiagMass, CsrMatrix, FeSpace, SplitOperators};
use crate::benchmark::{Benchmark, WaveSolution};
use crate::error::{Error, Result};
use crate::mesh::{HybridMesh, Point};
use crate::timeloop::{stable_tau, EnergyTrace, Leapfrog, PowerIteration, StabilityEstimate, WaveState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `tau_max` from the stability estimate.
    Auto,
}

#[derive(Clone, Debug)]
pub struct SimOptions {
    pub benchmark: Benchmark,
    pub tau: TimeStep,
    pub t_final: f64,
    pub damping: f64,
    /// Record the energy every this many steps (the last step is always recorded).
    pub energy_every: usize,
    /// Abort when a fixed `tau` exceeds the estimated bound.
    pub check_stability: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            benchmark: Benchmark::PlaneWave,
            tau: TimeStep::Fixed(0.001),
            t_final: 2.0,
            damping: 0.0,
            energy_every: 1,
            check_stability: true,
        }
    }
}

/// Assembled operators of one mesh.
pub struct Discretization {
    pub space: FeSpace,
    pub mass: BlockDiagMass,
    pub stiffness: CsrMatrix,
}

impl Discretization {
    pub fn new(mesh: HybridMesh) -> Result<Self> {
        let space = FeSpace::new(mesh)?;
        let mass = assemble_lumped_mass(&space)?;
        let stiffness = assemble_stiffness(&space);
        Ok(Self { space, mass, stiffness })
    }

    pub fn split(&self) -> Result<SplitOperators> {
        SplitOperators::new(&self.mass, &self.stiffness, self.space.dofmap.partition())
    }

    /// Stability estimate for the free-DOF system actually stepped.
    pub fn stability(&self, ops: &SplitOperators) -> StabilityEstimate {
        stable_tau(&ops.m_ff, &ops.k_ff, self.space.mesh.h_max(), PowerIteration::default())
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: ErrorReport,
    pub energy: EnergyTrace,
    pub stability: StabilityEstimate,
    pub tau: f64,
    pub n_steps: usize,
    pub n_dof: usize,
    /// Full coefficient vectors of `u_h(T)` and `v_h(T)`.
    pub u_final: DVector<f64>,
    pub v_final: DVector<f64>,
}

/// Solves the benchmark selected in `opts` on `disc` up to `t_final`.
///
/// `h` is the mesh size reported with the errors. The observer sees every
/// level `u^n` (full coefficients) with its step index and time.
pub fn simulate(
    disc: &Discretization,
    h: f64,
    opts: &SimOptions,
    observer: impl FnMut(usize, f64, &DVector<f64>) -> Result<()>,
) -> Result<RunOutcome> {
    simulate_with(disc, h, opts, opts.benchmark.solution(), observer)
}

/// Like [`simulate`], for an arbitrary exact solution supplying initial and boundary data.
pub fn simulate_with(
    disc: &Discretization,
    h: f64,
    opts: &SimOptions,
    exact: &dyn WaveSolution,
    mut observer: impl FnMut(usize, f64, &DVector<f64>) -> Result<()>,
) -> Result<RunOutcome> {
    if !(opts.t_final > 0.0) {
        return Err(Error::Config(format!("final time must be positive, got {}", opts.t_final)));
    }
    let space = &disc.space;
    let ops = disc.split()?;
    let stability = disc.stability(&ops);
    let requested = match opts.tau {
        TimeStep::Fixed(t) if t > 0.0 => t,
        TimeStep::Fixed(t) => return Err(Error::Config(format!("time step must be positive, got {t}"))),
        TimeStep::Auto => stability.tau_max,
    };
    let n_steps = ((opts.t_final / requested) - 1e-9).ceil().max(2.0) as usize;
    let tau = opts.t_final / n_steps as f64;
    if opts.check_stability && tau > stability.tau_max {
        return Err(Error::UnstableStep { tau, tau_max: stability.tau_max });
    }

    let u0 = space.interpolate(|x| exact.velocity(x, 0.0))?;
    let v0 = space.interpolate(|x| exact.velocity_dt(x, 0.0))?;
    let data = |x: Point, t: f64| -> Vector2<f64> { exact.velocity(x, t) };
    let mut lf = Leapfrog::new(space, ops, data);
    let mut state: WaveState = lf.init(&u0, &v0, 0.0, tau, opts.damping);
    let mut energy = EnergyTrace::default();
    energy.samples.push(lf.energy(&state));
    observer(0, 0.0, &u0)?;

    let every = opts.energy_every.max(1);
    let mut older = lf.full_previous(&state);
    let mut current = lf.full_current(&state);
    observer(1, state.t, &current)?;
    while state.step < n_steps {
        let before = lf.full_previous(&state);
        lf.step(&mut state)?;
        older = before;
        current = lf.full_current(&state);
        observer(state.step, state.t, &current)?;
        if state.step % every == 0 || state.step == n_steps {
            energy.samples.push(lf.energy(&state));
        }
    }
    let previous = lf.full_previous(&state);
    // second-order one-sided difference at the final level
    let v_final = (&current * 3.0 - &previous * 4.0 + &older) / (2.0 * tau);
    let report = ErrorReport::compute(space, h, exact, &current, &v_final, state.t)?;
    Ok(RunOutcome {
        report,
        energy,
        stability,
        tau,
        n_steps,
        n_dof: space.n_dof(),
        u_final: current,
        v_final,
    })
}
