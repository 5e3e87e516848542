//! Flow map, Lagrangian density and the Eulerian picture with its moving
//! vacuum boundary.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galerkin::{GalerkinSolver, ModalTrajectory};
use crate::numerics::simpson;
use crate::profile::{Field, Grid, HeightProfile};
use crate::trajectory::{FlowHistory, SolutionTrajectory, Velocity};

/// Trapezoid-rule time integral of modal velocity coefficients, starting
/// from `start` (the coefficients of `eta - x` at the first stored time).
pub fn integrate_displacement(v: &ModalTrajectory, start: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(v.len());
    let mut acc = start.to_vec();
    out.push(acc.clone());
    for k in 1..v.len() {
        let dt = v.times[k] - v.times[k - 1];
        for (a, (p, q)) in acc.iter_mut().zip(v.coefficients[k - 1].iter().zip(&v.coefficients[k])) {
            *a += 0.5 * dt * (p + q);
        }
        out.push(acc.clone());
    }
    out
}

pub(crate) fn flow_map_from(solver: &GalerkinSolver, times: &[f64], displacement: &[Vec<f64>]) -> FlowHistory {
    let x = solver.grid().nodes();
    FlowHistory {
        times: times.to_vec(),
        eta: displacement
            .iter()
            .map(|d| solver.nodal_values(d).iter().zip(x).map(|(a, b)| a + b).collect())
            .collect(),
        eta_x: displacement
            .iter()
            .map(|d| solver.nodal_gradient(d).iter().map(|a| 1.0 + a).collect())
            .collect(),
    }
}

/// `eta = x + int_0^t v` with `eta_x` by exact differentiation of the
/// integrated cosine series.
pub fn flow_map(v: &ModalTrajectory, grid: &Grid) -> FlowHistory {
    let n_modes = v.n_modes();
    let displacement = integrate_displacement(v, &vec![0.0; n_modes]);
    let basis = crate::galerkin::GalerkinBasis::new(n_modes.max(1)).expect("at least one mode");
    let (values, derivs) = basis.tabulate(grid);
    let x = grid.nodes();
    let eval = |m: &nalgebra::DMatrix<f64>, d: &[f64]| -> Vec<f64> {
        m.tr_mul(&nalgebra::DVector::from_column_slice(d)).data.into()
    };
    FlowHistory {
        times: v.times.clone(),
        eta: displacement
            .iter()
            .map(|d| eval(&values, d).iter().zip(x).map(|(a, b)| a + b).collect())
            .collect(),
        eta_x: displacement
            .iter()
            .map(|d| eval(&derivs, d).iter().map(|a| 1.0 + a).collect())
            .collect(),
    }
}

/// `f = rho0 / eta_x` at the nodes.
pub fn lagrangian_density(profile: &HeightProfile, eta_x: &[f64]) -> Result<Field> {
    if let Some(i) = eta_x.iter().position(|&e| !(e > 0.0)) {
        return Err(Error::FlowMapDegeneracy {
            t: f64::NAN,
            min_eta_x: eta_x[i],
            max_eta_x: eta_x[i],
        });
    }
    Ok(Field::new(
        "density",
        profile.values().iter().zip(eta_x).map(|(r, e)| r / e).collect(),
    ))
}

/// Height and velocity on the moving interval `I(t) = (eta(0,t), eta(1,t))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerianSnapshot {
    pub t: f64,
    pub boundary: (f64, f64),
    pub boundary_velocity: (f64, f64),
    /// `(y, rho, u)` on a uniform grid of `I(t)`.
    #[serde(skip)]
    pub samples: Vec<(f64, f64, f64)>,
}

impl EulerianSnapshot {
    /// Simpson integral of `rho` over `I(t)`.
    pub fn mass(&self) -> f64 {
        if self.samples.len() < 2 {
            return 0.0;
        }
        let h = self.samples[1].0 - self.samples[0].0;
        let rho: Vec<f64> = self.samples.iter().map(|s| s.1).collect();
        simpson(&rho, h)
    }
}

/// Solves `eta(x, t_k) = y` for `x` by bisection followed by Newton polish.
pub fn inverse_flow(traj: &SolutionTrajectory, k: usize, y: f64) -> Result<f64> {
    let (left, right) = (traj.eta_at(k, 0.0), traj.eta_at(k, 1.0));
    if !(left < right) {
        return Err(degenerate(traj, k));
    }
    if y <= left {
        return Ok(0.0);
    }
    if y >= right {
        return Ok(1.0);
    }
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    while b - a > 1e-9 {
        let m = 0.5 * (a + b);
        if traj.eta_at(k, m) < y {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..4 {
        let slope = traj.eta_x_at(k, x);
        if !(slope > 0.0) {
            return Err(degenerate(traj, k));
        }
        let step = (traj.eta_at(k, x) - y) / slope;
        x = (x - step).clamp(a, b);
        if step.abs() <= 1e-14 {
            break;
        }
    }
    Ok(x)
}

fn degenerate(traj: &SolutionTrajectory, k: usize) -> Error {
    let (lo, hi) = crate::trajectory::min_max(&traj.flow.eta_x[k]);
    Error::FlowMapDegeneracy {
        t: traj.times[k],
        min_eta_x: lo,
        max_eta_x: hi,
    }
}

/// Eulerian height and velocity at stored time `k`, sampled uniformly on `I(t)`.
pub fn eulerian_fields(
    profile: &HeightProfile,
    traj: &SolutionTrajectory,
    k: usize,
    n_samples: usize,
) -> Result<EulerianSnapshot> {
    if n_samples < 2 {
        return Err(Error::Precondition("need at least two Eulerian samples".into()));
    }
    if traj.flow.eta_x[k].iter().any(|&e| !(e > 0.0)) {
        return Err(degenerate(traj, k));
    }
    let (left, right) = (traj.eta_at(k, 0.0), traj.eta_at(k, 1.0));
    if !(left < right) {
        return Err(degenerate(traj, k));
    }
    let dy = (right - left) / (n_samples - 1) as f64;
    let samples: Result<Vec<(f64, f64, f64)>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let (y, x) = if i == 0 {
                (left, 0.0)
            } else if i == n_samples - 1 {
                (right, 1.0)
            } else {
                let y = left + i as f64 * dy;
                (y, inverse_flow(traj, k, y)?)
            };
            let rho = profile.value_at(x) / traj.eta_x_at(k, x);
            Ok((y, rho, traj.velocity_at(k, x)))
        })
        .collect();
    Ok(EulerianSnapshot {
        t: traj.times[k],
        boundary: (left, right),
        boundary_velocity: (traj.velocity_at(k, 0.0), traj.velocity_at(k, 1.0)),
        samples: samples?,
    })
}

/// Vacuum-boundary diagnostics at one stored time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub t: f64,
    /// `|v_x|` at `x = 0` and `x = 1`.
    pub vx_at_boundary: (f64, f64),
    /// `S = rho^2 - rho u_x` at each free boundary, as a one-sided limit.
    pub stress_at_boundary: (f64, f64),
    /// The `u_x = v_x / eta_x` factor of the stress at each boundary.
    pub ux_at_boundary: (f64, f64),
    /// One-sided `|d(c^2)/dy| = |rho0'| / eta_x^2` at each boundary.
    pub soundspeed_slope: (f64, f64),
}

pub fn boundary_diagnostics(profile: &HeightProfile, traj: &SolutionTrajectory, k: usize) -> BoundaryReport {
    let side = |x: f64| {
        let vx = traj.velocity_x_at(k, x);
        let ex = traj.eta_x_at(k, x);
        let rho = profile.value_at(x) / ex;
        let ux = vx / ex;
        let stress = rho * (rho - ux);
        let slope = profile.derivative_at(x, 1).abs() / (ex * ex);
        (vx.abs(), stress, ux, slope)
    };
    let (a, b) = (side(0.0), side(1.0));
    BoundaryReport {
        t: traj.times[k],
        vx_at_boundary: (a.0, b.0),
        stress_at_boundary: (a.1, b.1),
        ux_at_boundary: (a.2, b.2),
        soundspeed_slope: (a.3, b.3),
    }
}

/// Whether the trajectory carries modal (spectral) velocity data.
pub fn is_spectral(traj: &SolutionTrajectory) -> bool {
    matches!(traj.velocity, Velocity::Modal { .. })
}
