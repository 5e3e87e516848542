//! Solver-facing description of one nonlinear run.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::galerkin::{step_count, TimeScheme};
use crate::profile::{build_grid, sample_height_profile, Analytic, CosineSeries, HeightProfile, ProfileKind};

/// Where the first Picard iterate takes its flow map from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGuess {
    /// `eta = x + t u0(x)`, paired with the constant velocity `u0`.
    #[default]
    FromVelocity,
    /// `eta = x`, paired with zero velocity.
    Identity,
}

/// Everything a nonlinear solve needs.
#[derive(Debug, Clone)]
pub struct Problem {
    pub profile: HeightProfile,
    pub u0: Arc<dyn Analytic>,
    pub n_modes: usize,
    pub dt: f64,
    pub t_final: f64,
    pub picard_tol: f64,
    pub max_iter: usize,
    pub scheme: TimeScheme,
    /// Multiplier of the pressure term `(rho0^2 / eta_x^2)_x`.
    pub pressure: f64,
    pub initial_guess: InitialGuess,
    /// Restart the iteration every this many steps; `None` iterates over the
    /// whole window at once.
    pub window_steps: Option<usize>,
}

impl Problem {
    /// Parabolic profile `x (1 - x)`, `u0 = 0`, `T = 0.05`, `dt = 1e-4`,
    /// 32 modes on 401 nodes.
    pub fn canonical() -> Self {
        let grid = build_grid(401).expect("401 is a valid node count");
        let profile = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid).expect("parabolic profile is valid");
        Self::new(profile, Arc::new(CosineSeries::zero()))
    }

    pub fn new(profile: HeightProfile, u0: Arc<dyn Analytic>) -> Self {
        Self {
            profile,
            u0,
            n_modes: 32,
            dt: 1e-4,
            t_final: 0.05,
            picard_tol: 1e-10,
            max_iter: 50,
            scheme: TimeScheme::ImplicitEuler,
            pressure: 1.0,
            initial_guess: InitialGuess::FromVelocity,
            window_steps: None,
        }
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_modes(mut self, n_modes: usize) -> Self {
        self.n_modes = n_modes;
        self
    }

    pub fn with_pressure(mut self, pressure: f64) -> Self {
        self.pressure = pressure;
        self
    }

    pub fn with_initial_guess(mut self, guess: InitialGuess) -> Self {
        self.initial_guess = guess;
        self
    }

    pub fn with_u0(mut self, u0: Arc<dyn Analytic>) -> Self {
        self.u0 = u0;
        self
    }

    pub fn n_steps(&self) -> Result<usize> {
        step_count(self.t_final, self.dt)
    }

    /// Stored times `t0 + k dt`, `k = 0..=n_steps`.
    pub fn times(&self) -> Result<Vec<f64>> {
        Ok(time_levels(0.0, self.dt, self.n_steps()?))
    }
}

pub(crate) fn time_levels(t0: f64, dt: f64, n_steps: usize) -> Vec<f64> {
    (0..=n_steps).map(|k| t0 + k as f64 * dt).collect()
}
