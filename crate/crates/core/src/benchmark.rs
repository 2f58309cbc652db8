//! Exact solutions of `u_tt + d u_t - grad div u = 0` used as benchmarks.

use nalgebra::Vector2;

use crate::error::Error;
use crate::mesh::Point;

pub trait WaveSolution: Sync {
    fn velocity(&self, x: Point, t: f64) -> Vector2<f64>;
    fn velocity_dt(&self, x: Point, t: f64) -> Vector2<f64>;
    fn divergence(&self, x: Point, t: f64) -> f64;
}

/// Plane wave `u(x, y, t) = g(x - t) (1, 0)` with `g(s) = 2 exp(-50 (s + 1)^2)`; solves the undamped problem.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlaneWave;

impl PlaneWave {
    pub fn profile(s: f64) -> f64 {
        2.0 * (-50.0 * (s + 1.0).powi(2)).exp()
    }

    pub fn profile_derivative(s: f64) -> f64 {
        -200.0 * (s + 1.0) * (-50.0 * (s + 1.0).powi(2)).exp()
    }
}

impl WaveSolution for PlaneWave {
    fn velocity(&self, x: Point, t: f64) -> Vector2<f64> {
        Vector2::new(Self::profile(x.x - t), 0.0)
    }

    fn velocity_dt(&self, x: Point, t: f64) -> Vector2<f64> {
        Vector2::new(-Self::profile_derivative(x.x - t), 0.0)
    }

    fn divergence(&self, x: Point, t: f64) -> f64 {
        Self::profile_derivative(x.x - t)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroSolution;

impl WaveSolution for ZeroSolution {
    fn velocity(&self, _: Point, _: f64) -> Vector2<f64> {
        Vector2::zeros()
    }

    fn velocity_dt(&self, _: Point, _: f64) -> Vector2<f64> {
        Vector2::zeros()
    }

    fn divergence(&self, _: Point, _: f64) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Benchmark {
    PlaneWave,
    Zero,
}

impl Benchmark {
    pub fn solution(self) -> &'static dyn WaveSolution {
        match self {
            Benchmark::PlaneWave => &PlaneWave,
            Benchmark::Zero => &ZeroSolution,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::PlaneWave => "planewave",
            Benchmark::Zero => "zero",
        }
    }
}

impl std::str::FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "planewave" | "plane-wave" => Ok(Benchmark::PlaneWave),
            "zero" => Ok(Benchmark::Zero),
            other => Err(Error::Config(format!("unknown benchmark '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_peak_and_derivative() {
        assert_eq!(PlaneWave::profile(-1.0), 2.0);
        assert!(PlaneWave::profile(0.0) < 1e-20);
        let h = 1e-6;
        for s in [-1.2, -1.05, -0.9] {
            let fd = (PlaneWave::profile(s + h) - PlaneWave::profile(s - h)) / (2.0 * h);
            assert!((fd - PlaneWave::profile_derivative(s)).abs() < 1e-6);
        }
    }

    #[test]
    fn peak_crosses_mid_domain_at_t_one_and_a_half() {
        let u = PlaneWave;
        let x = Point::new(0.5, 0.3);
        assert_eq!(u.velocity(x, 1.5).x, 2.0);
        assert!(u.velocity(x, 1.4).x < 2.0 && u.velocity(x, 1.6).x < 2.0);
    }
}
