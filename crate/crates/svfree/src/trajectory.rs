//! Time-indexed Lagrangian data: modal and nodal velocity histories, flow
//! maps, and the accepted solution of the nonlinear problem.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::ContractionReport;
use crate::profile::{Grid, ModalField};

/// Admissible range for `eta_x` inside the solvers.
pub const ETA_X_RANGE: (f64, f64) = (0.1, 10.0);
/// The flow-map bound required of an accepted solution.
pub const ETA_BOUND: (f64, f64) = (0.5, 1.5);

/// Checks `eta_x` against the open range `(0.1, 10)`.
pub fn check_eta_x(eta_x: &[f64], t: f64) -> Result<()> {
    let (lo, hi) = min_max(eta_x);
    if !(lo > ETA_X_RANGE.0 && hi < ETA_X_RANGE.1) {
        return Err(Error::FlowMapDegeneracy {
            t,
            min_eta_x: lo,
            max_eta_x: hi,
        });
    }
    Ok(())
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        if v.is_nan() {
            (f64::NAN, f64::NAN)
        } else {
            (lo.min(v), hi.max(v))
        }
    })
}

/// Coefficients of the Galerkin solution at every stored time.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalTrajectory {
    pub times: Vec<f64>,
    pub coefficients: Vec<Vec<f64>>,
    pub dt: f64,
}

impl ModalTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_modes(&self) -> usize {
        self.coefficients.first().map_or(0, Vec::len)
    }

    pub fn field(&self, k: usize) -> ModalField {
        ModalField::cosine(self.coefficients[k].clone())
    }

    /// A trajectory that keeps `lambda` for every time in `times`.
    pub fn constant(times: Vec<f64>, lambda: Vec<f64>, dt: f64) -> Self {
        let coefficients = vec![lambda; times.len()];
        Self { times, coefficients, dt }
    }
}

/// Flow map `eta` and its Jacobian `eta_x` at the nodes for every stored time.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowHistory {
    pub times: Vec<f64>,
    pub eta: Vec<Vec<f64>>,
    pub eta_x: Vec<Vec<f64>>,
}

impl FlowHistory {
    /// The identity map held for all `times`.
    pub fn identity(grid: &Grid, times: Vec<f64>) -> Self {
        let n = times.len();
        Self {
            times,
            eta: vec![grid.nodes().to_vec(); n],
            eta_x: vec![vec![1.0; grid.n_nodes()]; n],
        }
    }

    /// `eta_x` at time `t`, interpolated linearly between stored times.
    pub fn eta_x_at(&self, t: f64) -> Vec<f64> {
        let k = self.times.partition_point(|&s| s < t);
        let tol = 1e-12 * (1.0 + t.abs());
        if k < self.times.len() && (self.times[k] - t).abs() <= tol {
            return self.eta_x[k].clone();
        }
        if k > 0 && (self.times[k - 1] - t).abs() <= tol {
            return self.eta_x[k - 1].clone();
        }
        if k == 0 {
            return self.eta_x[0].clone();
        }
        if k >= self.times.len() {
            return self.eta_x[self.times.len() - 1].clone();
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let r = (t - t0) / (t1 - t0);
        self.eta_x[k - 1]
            .iter()
            .zip(&self.eta_x[k])
            .map(|(a, b)| (1.0 - r) * a + r * b)
            .collect()
    }

    /// `(min, max)` of `eta_x` over all nodes and times.
    pub fn eta_x_range(&self) -> (f64, f64) {
        self.eta_x
            .iter()
            .map(|row| min_max(row))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (lo, hi)| (a.min(lo), b.max(hi)))
    }
}

/// Velocity history in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Velocity {
    /// Galerkin coefficients, with the integrated coefficients of `eta - x`.
    Modal {
        velocity: ModalTrajectory,
        displacement: Vec<Vec<f64>>,
    },
    /// Nodal values from the finite-difference oracle.
    Nodal { values: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Galerkin,
    FdOracle,
}

/// Convergence metadata of a nonlinear solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub solver: SolverKind,
    pub iterations: usize,
    pub final_diff: f64,
    pub history: Vec<ContractionReport>,
}

/// An accepted solution of the nonlinear problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrajectory {
    pub grid: Grid,
    pub times: Vec<f64>,
    pub velocity: Velocity,
    pub flow: FlowHistory,
    pub convergence: Convergence,
    /// Multiplier of the pressure term the trajectory was computed with.
    pub pressure: f64,
}

impl SolutionTrajectory {
    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectories are never empty")
    }

    pub fn modal(&self) -> Option<&ModalTrajectory> {
        match &self.velocity {
            Velocity::Modal { velocity, .. } => Some(velocity),
            Velocity::Nodal { .. } => None,
        }
    }

    /// Index of a stored time, matched to `1e-12` relative accuracy.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        let tol = 1e-12 * (1.0 + t.abs());
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .ok_or_else(|| Error::Precondition(format!("t = {t} is not a stored time")))
    }

    /// Nodal velocity at stored time `k`.
    pub fn velocity_nodal(&self, k: usize) -> Vec<f64> {
        match &self.velocity {
            Velocity::Modal { velocity, .. } => velocity.field(k).values_on(&self.grid),
            Velocity::Nodal { values } => values[k].clone(),
        }
    }

    /// Velocity at an arbitrary label `x` and stored time `k`.
    pub fn velocity_at(&self, k: usize, x: f64) -> f64 {
        match &self.velocity {
            Velocity::Modal { velocity, .. } => velocity.field(k).value_at(x),
            Velocity::Nodal { values } => interpolate(&self.grid, &values[k], x),
        }
    }

    /// `v_x` at an arbitrary label: spectral for modal data, one-sided
    /// second-order differences at the endpoints for nodal data.
    pub fn velocity_x_at(&self, k: usize, x: f64) -> f64 {
        match &self.velocity {
            Velocity::Modal { velocity, .. } => velocity.field(k).derivatives_at(x, 1)[1],
            Velocity::Nodal { values } => {
                let v = &values[k];
                let h = self.grid.spacing();
                let n = v.len();
                if x <= 0.0 {
                    (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
                } else if x >= 1.0 {
                    (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
                } else {
                    let i = ((x / h).floor() as usize).min(n - 2);
                    (v[i + 1] - v[i]) / h
                }
            }
        }
    }

    /// `eta(x, t_k)`.
    pub fn eta_at(&self, k: usize, x: f64) -> f64 {
        match &self.velocity {
            Velocity::Modal { displacement, .. } => x + ModalField::cosine(displacement[k].clone()).value_at(x),
            Velocity::Nodal { .. } => interpolate(&self.grid, &self.flow.eta[k], x),
        }
    }

    /// `eta_x(x, t_k)`.
    pub fn eta_x_at(&self, k: usize, x: f64) -> f64 {
        match &self.velocity {
            Velocity::Modal { displacement, .. } => {
                1.0 + ModalField::cosine(displacement[k].clone()).derivatives_at(x, 1)[1]
            }
            Velocity::Nodal { .. } => interpolate(&self.grid, &self.flow.eta_x[k], x),
        }
    }

    pub fn eta_x_range(&self) -> (f64, f64) {
        self.flow.eta_x_range()
    }
}

/// Piecewise-linear interpolation of nodal data.
pub(crate) fn interpolate(grid: &Grid, values: &[f64], x: f64) -> f64 {
    let n = grid.n_nodes();
    let pos = (x / grid.spacing()).clamp(0.0, (n - 1) as f64);
    let i = (pos.floor() as usize).min(n - 2);
    let r = pos - i as f64;
    if r == 0.0 {
        values[i]
    } else {
        (1.0 - r) * values[i] + r * values[i + 1]
    }
}
