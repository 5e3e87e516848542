//! Time-derivative jets and the two energy functionals.
//!
//! Time derivatives come from the momentum equation written as
//!
//! ```text
//! v_t = rho0^{-1} [ (rho0 v_x w)_x - (rho0^2 w)_x ],   w = eta_x^{-2},   (eta_x)_t = v_x
//! ```
//!
//! differentiated in time symbolically. At every node the right-hand side is
//! propagated as a truncated Taylor series in the spatial offset, one series
//! per time order, so that the division by `rho0` at the vacuum endpoints is
//! a series shift (a one-sided limit) rather than a `0/0`.
//!
//! At an endpoint the shift discards the leading numerator coefficient. For
//! the true solution at `t > 0` that coefficient vanishes (the Neumann
//! condition holds for every time derivative), so the discarded value is
//! reported as a boundary defect. For initial data it vanishes only if the
//! data are compatible to that order; otherwise the jet is infinite there.

use rayon::prelude::*;
use serde::Serialize;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::galerkin::GalerkinSolver;
use crate::numerics::factorial;
use crate::profile::{Analytic, Field, HeightProfile, ModalField};
use crate::series::{Series, LEN};
use crate::trajectory::{check_eta_x, SolutionTrajectory, Velocity};

/// How the leading numerator coefficient at a vacuum endpoint is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryRule {
    /// A nonzero leading coefficient makes the quotient infinite.
    Strict,
    /// The leading coefficient is dropped and reported as a defect.
    NeumannEnforced,
}

/// Time derivatives of `v` and their spatial derivatives at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDerivatives {
    pub t: f64,
    /// `d_t^k v`, `k = 0..=3`.
    pub dt_v: [Vec<f64>; 4],
    /// `d_t^k v_x`, `k = 0..=2`.
    pub dt_vx: [Vec<f64>; 3],
    /// `d_t d_x^k v`, `k = 2..=4`.
    pub dt_dx_v: [Vec<f64>; 3],
    /// `d_x^k v`, `k = 2..=6`.
    pub dx_v: [Vec<f64>; 5],
    /// Leading numerator coefficient per endpoint (`x = 0`, `x = 1`) and time order.
    pub boundary_defect: [[f64; 3]; 2],
}

impl TimeDerivatives {
    pub fn max_boundary_defect(&self) -> f64 {
        self.boundary_defect
            .iter()
            .flatten()
            .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// `g_k = d_t^k v` and `h_k = d_t^k v_x` at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialJet {
    pub g: [Field; 4],
    pub h: [Field; 3],
    /// Number of time orders whose endpoint numerators vanish (0..=3).
    pub compatible_orders: usize,
    pub derivatives: TimeDerivatives,
}

struct NodeJet {
    v: [Series; 4],
    defect: [f64; 3],
}

fn node_jet(rho: &Series, v0: Series, q0: Series, pressure: f64, rule: BoundaryRule) -> NodeJet {
    let vanishing = rho.0[0] == 0.0;
    let rho2 = *rho * *rho;
    let mut v = [v0, Series::zero(), Series::zero(), Series::zero()];
    let mut q = [q0, Series::zero(), Series::zero()];
    let mut p = [q0 * q0, Series::zero(), Series::zero()];
    let mut w = [p[0].recip(), Series::zero(), Series::zero()];
    let mut defect = [0.0; 3];
    let mut singular = false;
    for j in 0..3 {
        if singular {
            v[j + 1] = Series([f64::INFINITY; LEN]);
            continue;
        }
        if j >= 1 {
            q[j] = v[j - 1].deriv().scale(1.0 / j as f64);
            p[j] = (0..=j).fold(Series::zero(), |acc, m| acc + q[m] * q[j - m]);
            let s = (1..=j).fold(Series::zero(), |acc, m| acc + p[m] * w[j - m]);
            w[j] = (w[0] * s).scale(-1.0);
        }
        let a = (0..=j).fold(Series::zero(), |acc, m| acc + v[m].deriv() * w[j - m]);
        let r = (*rho * a).deriv() - (rho2 * w[j]).deriv().scale(pressure);
        let next = if vanishing {
            let (quot, lead) = r.div_vanishing(rho);
            let tol = 1e-10 * r.head_norm(4).max(f64::MIN_POSITIVE);
            if lead.abs() > tol {
                defect[j] = lead;
                if rule == BoundaryRule::Strict {
                    singular = true;
                    v[j + 1] = Series([f64::INFINITY; LEN]);
                    continue;
                }
            }
            quot
        } else {
            r.div(rho)
        };
        v[j + 1] = next.scale(1.0 / (j + 1) as f64);
    }
    NodeJet { v, defect }
}

/// Assembles nodal derivatives from per-node inputs
/// (`v` and `eta_x` derivatives of orders `0..LEN`).
fn collect_derivatives<F>(profile: &HeightProfile, t: f64, pressure: f64, rule: BoundaryRule, inputs: F) -> TimeDerivatives
where
    F: Fn(f64) -> (Vec<f64>, Vec<f64>) + Sync,
{
    let grid = profile.grid();
    let x = grid.nodes();
    let n = x.len();
    let jets: Vec<NodeJet> = x
        .par_iter()
        .map(|&xi| {
            let rho_d: Vec<f64> = (0..LEN).map(|l| profile.derivative_at(xi, l)).collect();
            let (vd, qd) = inputs(xi);
            node_jet(
                &Series::from_derivatives(&rho_d),
                Series::from_derivatives(&vd),
                Series::from_derivatives(&qd),
                pressure,
                rule,
            )
        })
        .collect();
    let pick = |order_t: usize, order_x: usize| -> Vec<f64> {
        let scale = factorial(order_t) * factorial(order_x);
        jets.iter().map(|j| j.v[order_t].0[order_x] * scale).collect()
    };
    TimeDerivatives {
        t,
        dt_v: [pick(0, 0), pick(1, 0), pick(2, 0), pick(3, 0)],
        dt_vx: [pick(0, 1), pick(1, 1), pick(2, 1)],
        dt_dx_v: [pick(1, 2), pick(1, 3), pick(1, 4)],
        dx_v: [pick(0, 2), pick(0, 3), pick(0, 4), pick(0, 5), pick(0, 6)],
        boundary_defect: [jets[0].defect, jets[n - 1].defect],
    }
}

/// Initial jets of `u0` for the given profile.
///
/// The endpoint rule is strict: if the data are not compatible to some
/// order, the corresponding `g_k` is infinite at the endpoint and the
/// compatibility order records where this happens.
pub fn initial_jet(profile: &HeightProfile, u0: &dyn Analytic, pressure: f64) -> Result<InitialJet> {
    let scale = 1.0 + profile.grid().nodes().iter().fold(0.0_f64, |m, &x| m.max(u0.value(x).abs()));
    for x in [0.0, 1.0] {
        let s = u0.derivative(x, 1);
        if s.abs() > 1e-10 * scale {
            return Err(Error::Validation(format!(
                "initial velocity must satisfy u0_x = 0 at the boundary, u0_x({x}) = {s:e}"
            )));
        }
    }
    let mut q = vec![0.0; LEN];
    q[0] = 1.0;
    let d = collect_derivatives(profile, 0.0, pressure, BoundaryRule::Strict, |x| {
        ((0..LEN).map(|k| u0.derivative(x, k)).collect(), q.clone())
    });
    let compatible_orders = (0..3)
        .take_while(|&j| d.boundary_defect[0][j] == 0.0 && d.boundary_defect[1][j] == 0.0)
        .count();
    let field = |label: &str, v: &Vec<f64>| Field::new(label, v.clone());
    Ok(InitialJet {
        g: [
            field("g0", &d.dt_v[0]),
            field("g1", &d.dt_v[1]),
            field("g2", &d.dt_v[2]),
            field("g3", &d.dt_v[3]),
        ],
        h: [
            field("h0", &d.dt_vx[0]),
            field("h1", &d.dt_vx[1]),
            field("h2", &d.dt_vx[2]),
        ],
        compatible_orders,
        derivatives: d,
    })
}

/// Time derivatives along a modal trajectory at stored time index `k`.
///
/// The first stored time uses the strict endpoint rule, later ones the
/// Neumann-enforced rule.
pub fn time_derivatives_at(profile: &HeightProfile, traj: &SolutionTrajectory, k: usize) -> Result<TimeDerivatives> {
    let (velocity, displacement) = match &traj.velocity {
        Velocity::Modal { velocity, displacement } => (velocity, displacement),
        Velocity::Nodal { .. } => {
            return Err(Error::Unsupported(
                "time derivatives need a modal (Galerkin) trajectory".into(),
            ))
        }
    };
    let t = traj.times[k];
    check_eta_x(&traj.flow.eta_x[k], t)?;
    let v = velocity.field(k);
    let disp = ModalField::cosine(displacement[k].clone());
    let rule = if k == 0 {
        BoundaryRule::Strict
    } else {
        BoundaryRule::NeumannEnforced
    };
    Ok(collect_derivatives(profile, t, traj.pressure, rule, |x| {
        let vd = v.derivatives_at(x, LEN - 1);
        let dd = disp.derivatives_at(x, LEN);
        let mut qd: Vec<f64> = dd[1..].to_vec();
        qd[0] += 1.0;
        (vd, qd)
    }))
}

/// Which time derivatives feed the energy functionals along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JetMethod {
    /// Momentum equation solved pointwise ([`time_derivatives_at`]).
    #[default]
    Pointwise,
    /// The modal ODE `M lambda' = F - S lambda` differentiated in time
    /// ([`time_derivatives_galerkin`]).
    Galerkin,
}

/// Time derivatives of the discrete solution itself: Taylor coefficients in
/// time of the modal system, with `S` and `F` expanded through
/// `(eta_x)_t = v_x`. Every time derivative is a cosine sum, so the Neumann
/// condition holds exactly and no endpoint division occurs.
pub fn time_derivatives_galerkin(solver: &GalerkinSolver, traj: &SolutionTrajectory, k: usize) -> Result<TimeDerivatives> {
    let velocity = match &traj.velocity {
        Velocity::Modal { velocity, .. } => velocity,
        Velocity::Nodal { .. } => {
            return Err(Error::Unsupported(
                "time derivatives need a modal (Galerkin) trajectory".into(),
            ))
        }
    };
    if velocity.n_modes() != solver.basis().n_modes() {
        return Err(Error::Precondition(format!(
            "trajectory has {} modes, solver {}",
            velocity.n_modes(),
            solver.basis().n_modes()
        )));
    }
    let t = traj.times[k];
    let q0 = &traj.flow.eta_x[k];
    check_eta_x(q0, t)?;
    let n = q0.len();
    let mut lam = vec![DVector::from_column_slice(&velocity.coefficients[k])];
    let mut q = vec![q0.clone()];
    let mut p = vec![q0.iter().map(|a| a * a).collect::<Vec<f64>>()];
    let mut w = vec![p[0].iter().map(|a| 1.0 / a).collect::<Vec<f64>>()];
    let mut stiff = Vec::new();
    let mut force = Vec::new();
    for j in 0..3 {
        if j >= 1 {
            let g = solver.nodal_gradient(lam[j - 1].as_slice());
            q.push(g.iter().map(|a| a / j as f64).collect());
            p.push((0..n).map(|i| (0..=j).map(|m| q[m][i] * q[j - m][i]).sum()).collect());
            let wj: Vec<f64> = (0..n)
                .map(|i| -w[0][i] * (1..=j).map(|m| p[m][i] * w[j - m][i]).sum::<f64>())
                .collect();
            w.push(wj);
        }
        stiff.push(solver.stiffness_weighted(&w[j]));
        force.push(solver.forcing_weighted(&w[j]));
        let mut rhs = force[j].clone();
        for m in 0..=j {
            rhs -= &stiff[m] * &lam[j - m];
        }
        lam.push(solver.mass_solve(&rhs) / (j + 1) as f64);
    }
    let grid = solver.grid();
    let field = |j: usize| ModalField::cosine((&lam[j] * factorial(j)).as_slice().to_vec());
    let nodal = |f: &ModalField, order: usize| f.derivative(order).values_on(grid);
    let (f0, f1, f2, f3) = (field(0), field(1), field(2), field(3));
    Ok(TimeDerivatives {
        t,
        dt_v: [nodal(&f0, 0), nodal(&f1, 0), nodal(&f2, 0), nodal(&f3, 0)],
        dt_vx: [nodal(&f0, 1), nodal(&f1, 1), nodal(&f2, 1)],
        dt_dx_v: [nodal(&f1, 2), nodal(&f1, 3), nodal(&f1, 4)],
        dx_v: [nodal(&f0, 2), nodal(&f0, 3), nodal(&f0, 4), nodal(&f0, 5), nodal(&f0, 6)],
        boundary_defect: [[0.0; 3]; 2],
    })
}

/// As [`time_derivatives_at`] for a stored time `t`.
pub fn time_derivatives_along(profile: &HeightProfile, traj: &SolutionTrajectory, t: f64) -> Result<TimeDerivatives> {
    let k = traj.time_index(t)?;
    time_derivatives_at(profile, traj, k)
}

/// Labels of the summands of `E`, in column order.
pub const HIGH_LABELS: [&str; 15] = [
    "E_v",
    "E_dt_v",
    "E_dt2_v",
    "E_dt3_v",
    "E_vx",
    "E_dt_vx",
    "E_dt2_vx",
    "E_w2_dt_dx2_v",
    "E_w3_dt_dx3_v",
    "E_w4_dt_dx4_v",
    "E_w2_dx2_v",
    "E_w3_dx3_v",
    "E_w4_dx4_v",
    "E_w5_dx5_v",
    "E_w6_dx6_v",
];

/// Labels of the summands of the lower-order functional, in column order.
pub const LOW_LABELS: [&str; 9] = [
    "L_v",
    "L_dt_v",
    "L_dt2_v",
    "L_vx",
    "L_dt_vx",
    "L_w2_dt_dx2_v",
    "L_w2_dx2_v",
    "L_w3_dx3_v",
    "L_w4_dx4_v",
];

/// Every summand of both energy functionals at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub t: f64,
    pub high: Vec<f64>,
    pub low: Vec<f64>,
    pub e_total: f64,
    pub low_e_total: f64,
    pub m0: f64,
    /// `E <= 2 M0`.
    pub within_apriori: bool,
    pub boundary_defect: f64,
}

impl EnergyReport {
    pub fn high_summands(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        HIGH_LABELS.iter().copied().zip(self.high.iter().copied())
    }

    pub fn low_summands(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        LOW_LABELS.iter().copied().zip(self.low.iter().copied())
    }
}

fn summands(profile: &HeightProfile, d: &TimeDerivatives) -> (Vec<f64>, Vec<f64>) {
    let sq = |f: &[f64], k: u32| profile.weighted_square(f, k);
    let high = vec![
        sq(&d.dt_v[0], 1),
        sq(&d.dt_v[1], 1),
        sq(&d.dt_v[2], 1),
        sq(&d.dt_v[3], 1),
        sq(&d.dt_vx[0], 1),
        sq(&d.dt_vx[1], 1),
        sq(&d.dt_vx[2], 1),
        sq(&d.dt_dx_v[0], 2),
        sq(&d.dt_dx_v[1], 3),
        sq(&d.dt_dx_v[2], 4),
        sq(&d.dx_v[0], 2),
        sq(&d.dx_v[1], 3),
        sq(&d.dx_v[2], 4),
        sq(&d.dx_v[3], 5),
        sq(&d.dx_v[4], 6),
    ];
    let low = vec![high[0], high[1], high[2], high[4], high[5], high[7], high[10], high[11], high[12]];
    (high, low)
}

/// Energy report from precomputed derivatives.
pub fn energy_report(profile: &HeightProfile, d: &TimeDerivatives, m0: f64) -> EnergyReport {
    let (high, low) = summands(profile, d);
    let e_total: f64 = high.iter().sum();
    let low_e_total: f64 = low.iter().sum();
    EnergyReport {
        t: d.t,
        e_total,
        low_e_total,
        m0,
        within_apriori: e_total <= 2.0 * m0,
        boundary_defect: d.max_boundary_defect(),
        high,
        low,
    }
}

/// `E(t)` (and the lower-order functional) at a stored time.
pub fn energy_high(profile: &HeightProfile, traj: &SolutionTrajectory, t: f64, m0: f64) -> Result<EnergyReport> {
    Ok(energy_report(profile, &time_derivatives_along(profile, traj, t)?, m0))
}

/// The lower-order functional at a stored time; the report carries both.
pub fn energy_low(profile: &HeightProfile, traj: &SolutionTrajectory, t: f64, m0: f64) -> Result<EnergyReport> {
    energy_high(profile, traj, t, m0)
}

/// `M0 = E(0, u0)`.
pub fn initial_energy(profile: &HeightProfile, jet: &InitialJet) -> f64 {
    summands(profile, &jet.derivatives).0.iter().sum()
}

/// Lower-order functional of the difference of two solutions at one time.
/// Equal entries (including equal infinities) contribute zero.
pub fn low_energy_of_difference(profile: &HeightProfile, a: &TimeDerivatives, b: &TimeDerivatives) -> f64 {
    let diff = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| if p == q { 0.0 } else { p - q }).collect() };
    let d = TimeDerivatives {
        t: a.t,
        dt_v: std::array::from_fn(|i| diff(&a.dt_v[i], &b.dt_v[i])),
        dt_vx: std::array::from_fn(|i| diff(&a.dt_vx[i], &b.dt_vx[i])),
        dt_dx_v: std::array::from_fn(|i| diff(&a.dt_dx_v[i], &b.dt_dx_v[i])),
        dx_v: std::array::from_fn(|i| diff(&a.dx_v[i], &b.dx_v[i])),
        boundary_defect: [[0.0; 3]; 2],
    };
    summands(profile, &d).1.iter().sum()
}

/// Energy reports along a trajectory with a fixed `M0`.
///
/// With [`JetMethod::Pointwise`], `M0 = E(0, u0)` from the initial jets;
/// with [`JetMethod::Galerkin`], `M0` is `E` of the discrete solution at the
/// first stored time.
#[derive(Debug, Clone)]
pub struct EnergyMonitor {
    profile: HeightProfile,
    method: JetMethod,
    solver: Option<GalerkinSolver>,
    pub m0: f64,
}

impl EnergyMonitor {
    pub fn new(
        profile: &HeightProfile,
        u0: &dyn Analytic,
        traj: &SolutionTrajectory,
        method: JetMethod,
    ) -> Result<Self> {
        let mut monitor = Self {
            profile: profile.clone(),
            method,
            solver: None,
            m0: f64::INFINITY,
        };
        match method {
            JetMethod::Pointwise => {
                monitor.m0 = initial_energy(profile, &initial_jet(profile, u0, traj.pressure)?);
            }
            JetMethod::Galerkin => {
                let n_modes = traj
                    .modal()
                    .ok_or_else(|| Error::Unsupported("energy monitor needs a modal trajectory".into()))?
                    .n_modes();
                monitor.solver = Some(GalerkinSolver::new(profile, n_modes)?.with_pressure(traj.pressure));
                monitor.m0 = summands(profile, &monitor.derivatives(traj, 0)?).0.iter().sum();
            }
        }
        Ok(monitor)
    }

    pub fn method(&self) -> JetMethod {
        self.method
    }

    pub fn derivatives(&self, traj: &SolutionTrajectory, k: usize) -> Result<TimeDerivatives> {
        match &self.solver {
            Some(s) => time_derivatives_galerkin(s, traj, k),
            None => time_derivatives_at(&self.profile, traj, k),
        }
    }

    pub fn report(&self, traj: &SolutionTrajectory, k: usize) -> Result<EnergyReport> {
        Ok(energy_report(&self.profile, &self.derivatives(traj, k)?, self.m0))
    }

    /// Reports at every `stride`-th stored time, always including the last.
    pub fn reports(&self, traj: &SolutionTrajectory, stride: usize) -> Result<Vec<EnergyReport>> {
        let last = traj.n_times() - 1;
        let mut ks: Vec<usize> = (0..=last).step_by(stride.max(1)).collect();
        if ks.last() != Some(&last) {
            ks.push(last);
        }
        ks.into_iter().map(|k| self.report(traj, k)).collect()
    }
}
