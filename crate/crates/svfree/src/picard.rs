//! Nonlinear solve by Picard iteration on the flow map.
//!
//! Each iterate solves the linearized problem with the flow map of the
//! previous one; the difference of successive velocities is measured in
//! `sup_t |sqrt(rho0) s| + |sqrt(rho0) s_x|_{L^2(0,T; L^2)}`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eulerian::{flow_map_from, integrate_displacement};
use crate::galerkin::{GalerkinSolver, ModalTrajectory};
pub use crate::oracle::fd_oracle_solve;
use crate::problem::{time_levels, InitialGuess, Problem};
use crate::profile::{Analytic, Grid, GridFunction, HeightProfile};
pub use crate::trajectory::SolutionTrajectory;
use crate::trajectory::{Convergence, FlowHistory, SolverKind, Velocity, ETA_BOUND};

/// Difference norms between two successive iterates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionReport {
    pub iteration: usize,
    pub sup_diff: f64,
    pub grad_diff: f64,
    /// Ratio of `sup_diff + grad_diff` to the previous iteration's; defined
    /// from the second iteration on.
    pub ratio: Option<f64>,
}

impl ContractionReport {
    pub fn total(&self) -> f64 {
        self.sup_diff + self.grad_diff
    }
}

/// `eta = x + t u0(x)` at every time.
pub fn initial_flow_guess(u0: &dyn Analytic, grid: &Grid, times: &[f64]) -> FlowHistory {
    let x = grid.nodes();
    let u: Vec<f64> = x.iter().map(|&s| u0.value(s)).collect();
    let ux: Vec<f64> = x.iter().map(|&s| u0.derivative(s, 1)).collect();
    FlowHistory {
        times: times.to_vec(),
        eta: times
            .iter()
            .map(|&t| x.iter().zip(&u).map(|(a, b)| a + t * b).collect())
            .collect(),
        eta_x: times.iter().map(|&t| ux.iter().map(|d| 1.0 + t * d).collect()).collect(),
    }
}

/// Difference norms of two modal trajectories on the same time grid.
pub fn contraction_metrics(
    v_n: &ModalTrajectory,
    v_n1: &ModalTrajectory,
    profile: &HeightProfile,
) -> Result<ContractionReport> {
    let solver = GalerkinSolver::new(profile, v_n.n_modes().max(1))?;
    metrics_with(&solver, v_n, v_n1)
}

fn metrics_with(solver: &GalerkinSolver, a: &ModalTrajectory, b: &ModalTrajectory) -> Result<ContractionReport> {
    if a.times.len() != b.times.len()
        || a.times.iter().zip(&b.times).any(|(s, t)| (s - t).abs() > 1e-12 * (1.0 + t.abs()))
    {
        return Err(Error::Precondition("trajectories live on different time grids".into()));
    }
    if a.n_modes() != b.n_modes() || a.n_modes() != solver.basis().n_modes() {
        return Err(Error::Precondition("trajectories use different mode counts".into()));
    }
    let mut sup = 0.0_f64;
    let mut grads = Vec::with_capacity(a.len());
    for (ca, cb) in a.coefficients.iter().zip(&b.coefficients) {
        let d = DVector::from_iterator(ca.len(), ca.iter().zip(cb).map(|(x, y)| y - x));
        sup = sup.max(solver.weighted_square(&d).max(0.0).sqrt());
        grads.push(solver.weighted_gradient_square(&d).max(0.0));
    }
    let grad_sq: f64 = a
        .times
        .windows(2)
        .zip(grads.windows(2))
        .map(|(t, g)| 0.5 * (t[1] - t[0]) * (g[0] + g[1]))
        .sum();
    Ok(ContractionReport {
        iteration: 0,
        sup_diff: sup,
        grad_diff: grad_sq.sqrt(),
        ratio: None,
    })
}

/// One Picard map application: solve with the frozen flow `eta_prev` and
/// integrate the resulting velocity into the next flow map.
pub fn picard_step(
    profile: &HeightProfile,
    u0: &GridFunction,
    eta_prev: &FlowHistory,
    t_final: f64,
    dt: f64,
    n_modes: usize,
) -> Result<(ModalTrajectory, FlowHistory)> {
    let solver = GalerkinSolver::new(profile, n_modes)?;
    let times = time_levels(0.0, dt, crate::galerkin::step_count(t_final, dt)?);
    let lambda0 = solver.project(u0);
    let (v, _) = solver.solve(&lambda0, &times, dt, eta_prev)?;
    let displacement = integrate_displacement(&v, &vec![0.0; n_modes]);
    let flow = flow_map_from(&solver, &times, &displacement);
    Ok((v, flow))
}

/// Outcome of iterating over one time window.
struct Window {
    velocity: ModalTrajectory,
    displacement: Vec<Vec<f64>>,
    flow: FlowHistory,
    history: Vec<ContractionReport>,
}

fn iterate_window(
    problem: &Problem,
    solver: &GalerkinSolver,
    lambda0: &DVector<f64>,
    displacement0: &[f64],
    times: &[f64],
    guess: InitialGuess,
) -> Result<Window> {
    let t0 = times[0];
    let grid = solver.grid();
    let base_eta = solver.nodal_values(displacement0);
    let base_eta_x = solver.nodal_gradient(displacement0);
    let (mut prev_v, mut flow) = match guess {
        InitialGuess::FromVelocity => {
            let v0 = solver.nodal_values(lambda0.as_slice());
            let v0x = solver.nodal_gradient(lambda0.as_slice());
            let flow = if t0 == 0.0 {
                initial_flow_guess(problem.u0.as_ref(), grid, times)
            } else {
                linear_flow(grid, times, &base_eta, &base_eta_x, &v0, &v0x)
            };
            (
                ModalTrajectory::constant(times.to_vec(), lambda0.as_slice().to_vec(), problem.dt),
                flow,
            )
        }
        InitialGuess::Identity => {
            let zero = vec![0.0; grid.n_nodes()];
            (
                ModalTrajectory::constant(times.to_vec(), vec![0.0; lambda0.len()], problem.dt),
                linear_flow(grid, times, &base_eta, &base_eta_x, &zero, &zero),
            )
        }
    };
    let mut history: Vec<ContractionReport> = Vec::new();
    for iteration in 1..=problem.max_iter {
        let (v, _) = solver.solve(lambda0, times, problem.dt, &flow)?;
        let mut report = metrics_with(solver, &prev_v, &v)?;
        report.iteration = iteration;
        if let Some(last) = history.last() {
            if last.total() > 0.0 {
                report.ratio = Some(report.total() / last.total());
            }
        }
        log::debug!(
            "picard t0={t0} iteration {iteration}: sup {:.3e} grad {:.3e}",
            report.sup_diff,
            report.grad_diff
        );
        history.push(report);
        let displacement = integrate_displacement(&v, displacement0);
        flow = flow_map_from(solver, times, &displacement);
        // Iterates live in the set 1/2 <= eta_x <= 3/2; leaving it ends the solve.
        let (lo, hi) = flow.eta_x_range();
        if !(lo >= ETA_BOUND.0 && hi <= ETA_BOUND.1) {
            return Err(Error::EtaBound {
                t_final: problem.t_final,
                min_eta_x: lo,
                max_eta_x: hi,
            });
        }
        prev_v = v;
        if report.total() < problem.picard_tol {
            return Ok(Window {
                velocity: prev_v,
                displacement,
                flow,
                history,
            });
        }
    }
    Err(Error::NonConvergence { history })
}

/// `eta = base + (t - t0) v0`, the linear-in-time continuation of a state.
fn linear_flow(grid: &Grid, times: &[f64], base: &[f64], base_x: &[f64], v0: &[f64], v0x: &[f64]) -> FlowHistory {
    let t0 = times[0];
    let x = grid.nodes();
    FlowHistory {
        times: times.to_vec(),
        eta: times
            .iter()
            .map(|&t| (0..x.len()).map(|i| x[i] + base[i] + (t - t0) * v0[i]).collect())
            .collect(),
        eta_x: times
            .iter()
            .map(|&t| (0..x.len()).map(|i| 1.0 + base_x[i] + (t - t0) * v0x[i]).collect())
            .collect(),
    }
}

/// Solves the nonlinear problem and enforces `1/2 <= eta_x <= 3/2`.
pub fn solve_nonlinear(problem: &Problem) -> Result<SolutionTrajectory> {
    let solver = GalerkinSolver::new(&problem.profile, problem.n_modes)?
        .with_scheme(problem.scheme)
        .with_pressure(problem.pressure);
    let times = problem.times()?;
    let n_steps = times.len() - 1;
    let window = problem.window_steps.unwrap_or(n_steps).clamp(1, n_steps);
    let u0 = GridFunction::Analytic(problem.u0.clone());
    let mut lambda = solver.project(&u0);
    let mut disp = vec![0.0; problem.n_modes];

    let mut all_coeffs: Vec<Vec<f64>> = vec![lambda.as_slice().to_vec()];
    let mut all_disp: Vec<Vec<f64>> = vec![disp.clone()];
    let mut flow = FlowHistory {
        times: vec![0.0],
        eta: vec![problem.profile.grid().nodes().to_vec()],
        eta_x: vec![vec![1.0; problem.profile.grid().n_nodes()]],
    };
    let mut history = Vec::new();
    let mut start = 0;
    while start < n_steps {
        let end = (start + window).min(n_steps);
        let slice = &times[start..=end];
        let w = iterate_window(problem, &solver, &lambda, &disp, slice, problem.initial_guess)
            .map_err(|e| match e {
                Error::NonConvergence { history: h } => Error::NonConvergence {
                    history: history.iter().copied().chain(h).collect(),
                },
                other => other,
            })?;
        all_coeffs.extend(w.velocity.coefficients[1..].iter().cloned());
        all_disp.extend(w.displacement[1..].iter().cloned());
        flow.times.extend_from_slice(&w.flow.times[1..]);
        flow.eta.extend(w.flow.eta[1..].iter().cloned());
        flow.eta_x.extend(w.flow.eta_x[1..].iter().cloned());
        history.extend(w.history);
        lambda = DVector::from_column_slice(w.velocity.coefficients.last().expect("window is non-empty"));
        disp = w.displacement.last().expect("window is non-empty").clone();
        start = end;
    }
    let (lo, hi) = flow.eta_x_range();
    if !(lo >= ETA_BOUND.0 && hi <= ETA_BOUND.1) {
        return Err(Error::EtaBound {
            t_final: problem.t_final,
            min_eta_x: lo,
            max_eta_x: hi,
        });
    }
    let final_diff = history.last().map_or(0.0, ContractionReport::total);
    Ok(SolutionTrajectory {
        grid: problem.profile.grid().clone(),
        times: times.clone(),
        velocity: Velocity::Modal {
            velocity: ModalTrajectory {
                times,
                coefficients: all_coeffs,
                dt: problem.dt,
            },
            displacement: all_disp,
        },
        flow,
        convergence: Convergence {
            solver: SolverKind::Galerkin,
            iterations: history.len(),
            final_diff,
            history,
        },
        pressure: problem.pressure,
    })
}
