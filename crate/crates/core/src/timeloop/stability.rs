use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{BlockDiagMass, CsrExt, CsrMatrix};

#[derive(Clone, Copy, Debug)]
pub struct PowerIteration {
    /// Relative change of the Rayleigh quotient at which iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the leapfrog bound `2 / sqrt(lambda_max)` returned as `tau_max`.
    pub safety: f64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self { tol: 1e-4, max_iter: 500, safety: 0.9 }
    }
}

#[derive(Clone, Debug)]
pub struct StabilityEstimate {
    pub lambda_max: f64,
    pub tau_max: f64,
    pub iterations: usize,
    pub converged: bool,
    pub warning: Option<String>,
}

impl StabilityEstimate {
    /// The undamped leapfrog stability bound `2 / sqrt(lambda_max)`.
    pub fn leapfrog_bound(&self) -> f64 {
        2.0 / self.lambda_max.sqrt()
    }
}

/// Largest eigenvalue of `M^{-1} K` by power iteration and the resulting step bound.
///
/// If the iteration does not settle, `tau_max` falls back to `h / 10`.
pub fn stable_tau(mass: &BlockDiagMass, stiffness: &CsrMatrix, h: f64, opts: PowerIteration) -> StabilityEstimate {
    let n = mass.n_dof();
    if n == 0 {
        return StabilityEstimate {
            lambda_max: 0.0,
            tau_max: f64::INFINITY,
            iterations: 0,
            converged: true,
            warning: None,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
    let mut x = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    let mut kx = DVector::zeros(n);
    let mut y = DVector::zeros(n);
    let mut lambda = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    let normalize = |v: &mut DVector<f64>| {
        let m = mass.quadratic_form(v).sqrt();
        *v /= m;
    };
    normalize(&mut x);
    for it in 1..=opts.max_iter {
        iterations = it;
        stiffness.mul_into(x.as_slice(), kx.as_mut_slice());
        // x is M-normalized, so the Rayleigh quotient is x.Kx
        let next = x.dot(&kx);
        mass.solve_into(kx.as_slice(), y.as_mut_slice());
        std::mem::swap(&mut x, &mut y);
        normalize(&mut x);
        if !x.iter().all(|v| v.is_finite()) {
            break;
        }
        if it > 1 && (next - lambda).abs() <= opts.tol * next.abs() {
            lambda = next;
            converged = true;
            break;
        }
        lambda = next;
    }
    if converged && lambda > 0.0 {
        StabilityEstimate { lambda_max: lambda, tau_max: opts.safety * 2.0 / lambda.sqrt(), iterations, converged, warning: None }
    } else {
        StabilityEstimate {
            lambda_max: lambda,
            tau_max: h / 10.0,
            iterations,
            converged: false,
            warning: Some(format!(
                "power iteration did not converge in {iterations} iterations; using tau = h/10 = {}",
                h / 10.0
            )),
        }
    }
}
