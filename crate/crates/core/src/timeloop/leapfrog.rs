use nalgebra::{DVector, Vector2};

use crate::assembly::{CsrExt, DofKind, FeSpace, SplitOperators};
use crate::error::{Error, Result};
use crate::mesh::Point;

/// Two consecutive time levels of the free coefficients plus the matching boundary values.
#[derive(Clone, Debug)]
pub struct WaveState {
    pub u_prev: DVector<f64>,
    pub u_curr: DVector<f64>,
    pub g_prev: DVector<f64>,
    pub g_curr: DVector<f64>,
    /// Time of `u_curr`.
    pub t: f64,
    pub tau: f64,
    pub damping: f64,
    pub step: usize,
}

impl WaveState {
    /// The same pair of levels with time running backwards.
    pub fn reversed(&self) -> Self {
        Self {
            u_prev: self.u_curr.clone(),
            u_curr: self.u_prev.clone(),
            g_prev: self.g_curr.clone(),
            g_curr: self.g_prev.clone(),
            t: self.t - self.tau,
            tau: -self.tau,
            damping: self.damping,
            step: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergySample {
    pub step: usize,
    pub time: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

#[derive(Clone, Debug, Default)]
pub struct EnergyTrace {
    pub samples: Vec<EnergySample>,
}

impl EnergyTrace {
    pub fn totals(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.total)
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "step,time,kinetic,potential,total")?;
        for s in &self.samples {
            writeln!(out, "{},{},{:e},{:e},{:e}", s.step, s.time, s.kinetic, s.potential, s.total)?;
        }
        Ok(())
    }
}

/// Leapfrog integrator on the free DOFs with boundary values eliminated.
pub struct Leapfrog<G> {
    pub ops: SplitOperators,
    boundary_points: Vec<(Point, Vector2<f64>)>,
    data: G,
    ku: DVector<f64>,
    rhs: DVector<f64>,
    work_b: DVector<f64>,
    work_f: DVector<f64>,
}

pub type HomogeneousData = fn(Point, f64) -> Vector2<f64>;

impl Leapfrog<HomogeneousData> {
    pub fn homogeneous(space: &FeSpace, ops: SplitOperators) -> Self {
        Self::new(space, ops, |_, _| Vector2::zeros())
    }
}

impl<G: Fn(Point, f64) -> Vector2<f64>> Leapfrog<G> {
    /// `data(x, t)` supplies the velocity whose normal trace is imposed on the boundary.
    pub fn new(space: &FeSpace, ops: SplitOperators, data: G) -> Self {
        let mesh = &space.mesh;
        let boundary_points = ops
            .partition
            .constrained
            .iter()
            .map(|&d| match space.dofmap.kind(mesh, d) {
                DofKind::EdgeEndpoint { edge, vertex } => (mesh.vertex(vertex), mesh.edge_normal(edge)),
                DofKind::Interior { .. } => unreachable!(),
            })
            .collect();
        let (nf, nb) = (ops.n_free(), ops.n_constrained());
        Self {
            ops,
            boundary_points,
            data,
            ku: DVector::zeros(nf),
            rhs: DVector::zeros(nf),
            work_b: DVector::zeros(nb),
            work_f: DVector::zeros(nf),
        }
    }

    pub fn boundary_values(&self, t: f64) -> DVector<f64> {
        DVector::from_iterator(
            self.boundary_points.len(),
            self.boundary_points.iter().map(|&(p, n)| (self.data)(p, t).dot(&n)),
        )
    }

    /// Boundary-elimination terms `-K_FB g^n - M_FB (g^{n+1} - 2 g^n + g^{n-1}) / tau^2
    /// - d M_FB (g^{n+1} - g^{n-1}) / (2 tau)` written into `self.rhs`.
    fn boundary_rhs(&mut self, g_prev: &DVector<f64>, g_curr: &DVector<f64>, g_next: &DVector<f64>, tau: f64, d: f64) {
        self.rhs.fill(0.0);
        if g_prev.amax() == 0.0 && g_curr.amax() == 0.0 && g_next.amax() == 0.0 {
            return;
        }
        self.ops.k_fb.mul_into(g_curr.as_slice(), self.work_f.as_mut_slice());
        self.rhs -= &self.work_f;
        for i in 0..self.work_b.len() {
            self.work_b[i] = (g_next[i] - 2.0 * g_curr[i] + g_prev[i]) / (tau * tau)
                + d * (g_next[i] - g_prev[i]) / (2.0 * tau);
        }
        self.ops.m_fb.mul_into(self.work_b.as_slice(), self.work_f.as_mut_slice());
        self.rhs -= &self.work_f;
    }

    /// Leapfrog start from full coefficient vectors of `u(t0)` and `u_t(t0)`:
    /// `u^1 = u^0 + tau v^0 + tau^2/2 M^{-1} (rhs^0 - K u^0 - d M v^0)`.
    pub fn init(&mut self, u0: &DVector<f64>, v0: &DVector<f64>, t0: f64, tau: f64, damping: f64) -> WaveState {
        let part = &self.ops.partition;
        let (u0f, v0f) = (part.free_part(u0), part.free_part(v0));
        let g_prev = self.boundary_values(t0 - tau);
        let g0 = self.boundary_values(t0);
        let g1 = self.boundary_values(t0 + tau);
        self.boundary_rhs(&g_prev, &g0, &g1, tau, damping);

        self.ops.k_ff.mul_into(u0f.as_slice(), self.ku.as_mut_slice());
        let mut r = &self.rhs - &self.ku;
        let mv = {
            let mut y = DVector::zeros(v0f.len());
            self.ops.m_ff.mul_into(v0f.as_slice(), y.as_mut_slice());
            y
        };
        r -= mv * damping;
        let acc = self.ops.m_ff.solve(&r);
        let u1 = &u0f + &v0f * tau + acc * (0.5 * tau * tau);
        WaveState { u_prev: u0f, u_curr: u1, g_prev: g0, g_curr: g1, t: t0 + tau, tau, damping, step: 1 }
    }

    /// Advances one step:
    /// `(1 + d tau/2) M u^{n+1} = M (2u^n - u^{n-1}) + (d tau/2) M u^{n-1} - tau^2 (K u^n - rhs^n)`.
    pub fn step(&mut self, s: &mut WaveState) -> Result<()> {
        let (tau, d) = (s.tau, s.damping);
        let g_next = self.boundary_values(s.t + tau);
        self.boundary_rhs(&s.g_prev, &s.g_curr, &g_next, tau, d);

        self.ops.k_ff.mul_into(s.u_curr.as_slice(), self.ku.as_mut_slice());
        self.rhs -= &self.ku;
        // M^{-1}(rhs - K u^n); the M-products of the other terms cancel against the solve
        self.ops.m_ff.solve_into(self.rhs.as_slice(), self.work_f.as_mut_slice());
        let half = 0.5 * d * tau;
        let inv = 1.0 / (1.0 + half);
        let mut finite = true;
        for i in 0..s.u_curr.len() {
            let next = (2.0 * s.u_curr[i] - s.u_prev[i] + half * s.u_prev[i] + tau * tau * self.work_f[i]) * inv;
            finite &= next.is_finite();
            s.u_prev[i] = s.u_curr[i];
            s.u_curr[i] = next;
        }
        s.g_prev = std::mem::replace(&mut s.g_curr, g_next);
        s.t += tau;
        s.step += 1;
        if !finite {
            return Err(Error::Diverged { step: s.step, time: s.t });
        }
        Ok(())
    }

    /// Discrete energy of the level pair in `s`:
    /// `1/2 |(u^{n+1} - u^n)/tau|_M^2 + 1/2 (K u^n, u^{n+1})`.
    pub fn energy(&self, s: &WaveState) -> EnergySample {
        let diff = (&s.u_curr - &s.u_prev) / s.tau;
        let kinetic = 0.5 * self.ops.m_ff.quadratic_form(&diff);
        let potential = 0.5 * s.u_curr.dot(&self.ops.k_ff.mul_vec(&s.u_prev));
        EnergySample { step: s.step, time: s.t, kinetic, potential, total: kinetic + potential }
    }

    /// Full coefficient vector of the current level.
    pub fn full_current(&self, s: &WaveState) -> DVector<f64> {
        self.ops.partition.join(&s.u_curr, &s.g_curr)
    }

    pub fn full_previous(&self, s: &WaveState) -> DVector<f64> {
        self.ops.partition.join(&s.u_prev, &s.g_prev)
    }
}
