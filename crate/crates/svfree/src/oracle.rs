//! Independent finite-volume solver for cross-checking the Galerkin/Picard
//! pipeline. It shares no discretisation code with the spectral path.
//!
//! Nodal unknowns sit on the grid; each node owns the dual cell between the
//! neighbouring midpoints, with the exact mass `int rho0` of that cell. The
//! flux `rho0 v_x / eta_x^2 - rho0^2 / eta_x^2` is evaluated at midpoints and
//! vanishes at both ends, where `rho0 = 0`. Time stepping is implicit Euler;
//! the flow map is advanced by the trapezoid rule and iterated to consistency
//! with the new velocity inside each step.

use crate::error::{Error, Result};
use crate::numerics::{simpson, solve_tridiagonal};
use crate::problem::Problem;
use crate::trajectory::{check_eta_x, Convergence, FlowHistory, SolutionTrajectory, SolverKind, Velocity, ETA_BOUND};

const INNER_MAX: usize = 20;

pub fn fd_oracle_solve(problem: &Problem) -> Result<SolutionTrajectory> {
    let profile = &problem.profile;
    let grid = profile.grid();
    let n = grid.n_nodes();
    let h = grid.spacing();
    let x = grid.nodes();
    let times = problem.times()?;
    let dt = problem.dt;

    let mid: Vec<f64> = (0..n - 1).map(|i| 0.5 * (x[i] + x[i + 1])).collect();
    let rho_mid: Vec<f64> = mid.iter().map(|&m| profile.value_at(m)).collect();
    let mass: Vec<f64> = (0..n)
        .map(|i| {
            let lo = if i == 0 { 0.0 } else { mid[i - 1] };
            let hi = if i == n - 1 { 1.0 } else { mid[i] };
            cell_mass(profile, lo, x[i]) + cell_mass(profile, x[i], hi)
        })
        .collect();

    let mut v: Vec<f64> = x.iter().map(|&s| problem.u0.value(s)).collect();
    let mut eta = x.to_vec();
    let mut values = vec![v.clone()];
    let mut etas = vec![eta.clone()];
    let mut eta_xs = vec![vec![1.0; n]];

    for &t in &times[1..] {
        let mut eta_new: Vec<f64> = eta.iter().zip(&v).map(|(e, u)| e + dt * u).collect();
        let mut v_new = v.clone();
        for inner in 0..INNER_MAX {
            let ex_mid: Vec<f64> = (0..n - 1).map(|i| (eta_new[i + 1] - eta_new[i]) / h).collect();
            check_eta_x(&ex_mid, t)?;
            let a: Vec<f64> = (0..n - 1).map(|i| rho_mid[i] / (ex_mid[i] * ex_mid[i]) / h).collect();
            let b: Vec<f64> = (0..n - 1)
                .map(|i| problem.pressure * rho_mid[i] * rho_mid[i] / (ex_mid[i] * ex_mid[i]))
                .collect();
            let mut lower = vec![0.0; n];
            let mut upper = vec![0.0; n];
            let mut diag: Vec<f64> = mass.iter().map(|m| m / dt).collect();
            let mut rhs: Vec<f64> = mass.iter().zip(&v).map(|(m, u)| m / dt * u).collect();
            for i in 0..n - 1 {
                diag[i] += a[i];
                diag[i + 1] += a[i];
                upper[i] = -a[i];
                lower[i + 1] = -a[i];
                rhs[i] -= b[i];
                rhs[i + 1] += b[i];
            }
            let next = solve_tridiagonal(&lower, &diag, &upper, &rhs).ok_or(Error::LinearSolve { t })?;
            let change = next
                .iter()
                .zip(&v_new)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            let scale = 1.0 + next.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
            v_new = next;
            eta_new = eta.iter().zip(v.iter().zip(&v_new)).map(|(e, (p, q))| e + 0.5 * dt * (p + q)).collect();
            if inner > 0 && change <= 1e-14 * scale {
                break;
            }
        }
        v = v_new;
        eta = eta_new;
        let ex = nodal_gradient(&eta, h);
        check_eta_x(&ex, t)?;
        values.push(v.clone());
        etas.push(eta.clone());
        eta_xs.push(ex);
    }

    let flow = FlowHistory {
        times: times.clone(),
        eta: etas,
        eta_x: eta_xs,
    };
    let (lo, hi) = flow.eta_x_range();
    if !(lo >= ETA_BOUND.0 && hi <= ETA_BOUND.1) {
        return Err(Error::EtaBound {
            t_final: problem.t_final,
            min_eta_x: lo,
            max_eta_x: hi,
        });
    }
    Ok(SolutionTrajectory {
        grid: grid.clone(),
        times,
        velocity: Velocity::Nodal { values },
        flow,
        convergence: Convergence {
            solver: SolverKind::FdOracle,
            iterations: 1,
            final_diff: 0.0,
            history: Vec::new(),
        },
        pressure: problem.pressure,
    })
}

/// `int_lo^hi rho0` by five-point Simpson on the analytic profile.
fn cell_mass(profile: &crate::profile::HeightProfile, lo: f64, hi: f64) -> f64 {
    let h = (hi - lo) / 4.0;
    let f: Vec<f64> = (0..5).map(|i| profile.value_at(lo + i as f64 * h)).collect();
    simpson(&f, h)
}

/// Second-order nodal derivative: centered inside, one-sided at the ends.
fn nodal_gradient(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h)
            } else {
                (u[i + 1] - u[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}
