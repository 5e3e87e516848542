//! Galerkin discretisation of the linearized problem
//!
//! ```text
//! rho0 v_t + (rho0^2 / eta_x^2)_x = (rho0 v_x / eta_x^2)_x
//! ```
//!
//! with a frozen flow map, in the Neumann cosine basis.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cospi, sinpi};
use crate::problem::time_levels;
use crate::profile::{Grid, GridFunction, HeightProfile};
pub use crate::trajectory::ModalTrajectory;
use crate::trajectory::{check_eta_x, FlowHistory};

/// `e_0 = 1, e_n = sqrt2 cos(n pi x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GalerkinBasis {
    n_modes: usize,
}

pub fn neumann_basis(n_modes: usize) -> Result<GalerkinBasis> {
    GalerkinBasis::new(n_modes)
}

impl GalerkinBasis {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::config("n_modes", "need at least one mode"));
        }
        Ok(Self { n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn value(&self, n: usize, x: f64) -> f64 {
        if n == 0 {
            1.0
        } else {
            SQRT_2 * cospi(n as f64 * x)
        }
    }

    pub fn derivative(&self, n: usize, x: f64) -> f64 {
        if n == 0 {
            0.0
        } else {
            -SQRT_2 * n as f64 * PI * sinpi(n as f64 * x)
        }
    }

    /// Values and first derivatives at the nodes, one row per mode.
    pub fn tabulate(&self, grid: &Grid) -> (DMatrix<f64>, DMatrix<f64>) {
        let x = grid.nodes();
        let values = DMatrix::from_fn(self.n_modes, x.len(), |n, j| self.value(n, x[j]));
        let derivs = DMatrix::from_fn(self.n_modes, x.len(), |n, j| self.derivative(n, x[j]));
        (values, derivs)
    }

    /// Largest deviation of the quadrature Gram matrix from the identity.
    pub fn orthonormality_defect(&self, grid: &Grid) -> f64 {
        let (b, _) = self.tabulate(grid);
        let w = simpson_weights(grid);
        let mut worst = 0.0_f64;
        for i in 0..self.n_modes {
            for j in 0..=i {
                let g: f64 = (0..grid.n_nodes()).map(|q| w[q] * b[(i, q)] * b[(j, q)]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }
}

/// Composite Simpson weights on the grid.
pub fn simpson_weights(grid: &Grid) -> Vec<f64> {
    let n = grid.n_nodes();
    let h = grid.spacing();
    (0..n)
        .map(|i| {
            let c = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeScheme {
    #[default]
    ImplicitEuler,
    CrankNicolson,
}

/// Mass, stiffness and forcing at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedOperators {
    pub mass: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
    pub forcing: DVector<f64>,
}

/// Discrete energy balance of a linearized solve:
/// `lhs = 1/2 |sqrt(rho0) v(T)|^2 + sum dt int rho0 v_x^2 / eta_x^2`,
/// `rhs = 1/2 |sqrt(rho0) v(0)|^2 + sum dt int rho0^2 v_x / eta_x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBalance {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Tabulated basis, quadrature weights and the factored mass matrix for one
/// profile. Stiffness and forcing are reassembled from `eta_x` on demand.
#[derive(Debug, Clone)]
pub struct GalerkinSolver {
    basis: GalerkinBasis,
    grid: Grid,
    values: DMatrix<f64>,
    derivs: DMatrix<f64>,
    quad: Vec<f64>,
    rho: Vec<f64>,
    mass: DMatrix<f64>,
    mass_factor: Cholesky<f64, Dyn>,
    /// `int rho0 (e_i)_x (e_j)_x`, used for gradient norms of differences.
    gradient_gram: DMatrix<f64>,
    scheme: TimeScheme,
    pressure: f64,
}

impl GalerkinSolver {
    pub fn new(profile: &HeightProfile, n_modes: usize) -> Result<Self> {
        let basis = GalerkinBasis::new(n_modes)?;
        let grid = profile.grid().clone();
        let (values, derivs) = basis.tabulate(&grid);
        let quad = simpson_weights(&grid);
        let rho = profile.values().to_vec();
        let rho_w: Vec<f64> = quad.iter().zip(&rho).map(|(q, r)| q * r).collect();
        let mass = symmetric_gram(&values, &rho_w);
        let mass_factor = Cholesky::new(mass.clone()).ok_or(Error::DegenerateMass)?;
        let gradient_gram = symmetric_gram(&derivs, &rho_w);
        Ok(Self {
            basis,
            grid,
            values,
            derivs,
            quad,
            rho,
            mass,
            mass_factor,
            gradient_gram,
            scheme: TimeScheme::ImplicitEuler,
            pressure: 1.0,
        })
    }

    pub fn with_scheme(mut self, scheme: TimeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    /// Multiplies the pressure forcing; `0` switches it off.
    pub fn with_pressure(mut self, pressure: f64) -> Self {
        self.pressure = pressure;
        self
    }

    pub fn basis(&self) -> &GalerkinBasis {
        &self.basis
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn gradient_gram(&self) -> &DMatrix<f64> {
        &self.gradient_gram
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    fn eta_weights(&self, eta_x: &[f64], power: i32, t: f64) -> Result<Vec<f64>> {
        check_eta_x(eta_x, t)?;
        Ok(self
            .quad
            .iter()
            .zip(&self.rho)
            .zip(eta_x)
            .map(|((q, r), e)| q * r.powi(power) / (e * e))
            .collect())
    }

    /// `S_ij = int rho0 (e_i)_x (e_j)_x / eta_x^2`.
    pub fn stiffness(&self, eta_x: &[f64], t: f64) -> Result<DMatrix<f64>> {
        let w = self.eta_weights(eta_x, 1, t)?;
        Ok(symmetric_gram(&self.derivs, &w))
    }

    /// `F_j = int rho0^2 (e_j)_x / eta_x^2`, times the pressure multiplier.
    pub fn forcing(&self, eta_x: &[f64], t: f64) -> Result<DVector<f64>> {
        let w = self.eta_weights(eta_x, 2, t)?;
        let mut f = &self.derivs * DVector::from_vec(w);
        f *= self.pressure;
        f[0] = 0.0;
        Ok(f)
    }

    /// `int rho0 (e_i)_x (e_j)_x w` for nodal weights `w` of any sign.
    pub fn stiffness_weighted(&self, w: &[f64]) -> DMatrix<f64> {
        let q: Vec<f64> = self.quad.iter().zip(&self.rho).zip(w).map(|((a, r), b)| a * r * b).collect();
        symmetric_gram(&self.derivs, &q)
    }

    /// `pressure * int rho0^2 (e_j)_x w` for nodal weights `w`.
    pub fn forcing_weighted(&self, w: &[f64]) -> DVector<f64> {
        let q: Vec<f64> = self
            .quad
            .iter()
            .zip(&self.rho)
            .zip(w)
            .map(|((a, r), b)| self.pressure * a * r * r * b)
            .collect();
        let mut f = &self.derivs * DVector::from_vec(q);
        f[0] = 0.0;
        f
    }

    /// `M^{-1} b`.
    pub fn mass_solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.mass_factor.solve(b)
    }

    pub fn operators(&self, eta_x: &[f64], t: f64) -> Result<LinearizedOperators> {
        Ok(LinearizedOperators {
            mass: self.mass.clone(),
            stiffness: self.stiffness(eta_x, t)?,
            forcing: self.forcing(eta_x, t)?,
        })
    }

    /// Unweighted `L^2` projection onto the basis.
    pub fn project(&self, u0: &GridFunction) -> DVector<f64> {
        let u = u0.values(&self.grid);
        let w: Vec<f64> = self.quad.iter().zip(&u).map(|(q, v)| q * v).collect();
        &self.values * DVector::from_vec(w)
    }

    /// `sum c_n e_n` at the nodes.
    pub fn nodal_values(&self, c: &[f64]) -> Vec<f64> {
        (self.values.tr_mul(&DVector::from_column_slice(c))).data.into()
    }

    /// `sum c_n (e_n)_x` at the nodes.
    pub fn nodal_gradient(&self, c: &[f64]) -> Vec<f64> {
        (self.derivs.tr_mul(&DVector::from_column_slice(c))).data.into()
    }

    /// `|sqrt(rho0) sum c_n e_n|^2`.
    pub fn weighted_square(&self, c: &DVector<f64>) -> f64 {
        c.dot(&(&self.mass * c))
    }

    /// `|sqrt(rho0) (sum c_n e_n)_x|^2`.
    pub fn weighted_gradient_square(&self, c: &DVector<f64>) -> f64 {
        c.dot(&(&self.gradient_gram * c))
    }

    /// Integrates the modal system from `lambda0` at `times[0]` through the
    /// given time levels (spaced by `dt`), freezing the flow map to `eta_bar`.
    pub fn solve(
        &self,
        lambda0: &DVector<f64>,
        times: &[f64],
        dt: f64,
        eta_bar: &FlowHistory,
    ) -> Result<(ModalTrajectory, EnergyBalance)> {
        if !(dt > 0.0) {
            return Err(Error::config("dt", "time step must be positive"));
        }
        let t0 = times[0];
        let mut coefficients = Vec::with_capacity(times.len());
        coefficients.push(lambda0.as_slice().to_vec());
        let mut lambda = lambda0.clone();
        let half0 = 0.5 * self.weighted_square(lambda0);
        let mut dissipation = 0.0;
        let mut work = 0.0;
        let mut prev: Option<(DMatrix<f64>, DVector<f64>)> = None;
        if self.scheme == TimeScheme::CrankNicolson {
            let e = eta_bar.eta_x_at(t0);
            prev = Some((self.stiffness(&e, t0)?, self.forcing(&e, t0)?));
        }
        for &t in &times[1..] {
            let eta_x = eta_bar.eta_x_at(t);
            let s = self.stiffness(&eta_x, t)?;
            let f = self.forcing(&eta_x, t)?;
            let next = match (self.scheme, prev.as_ref()) {
                (TimeScheme::CrankNicolson, Some((s0, f0))) => {
                    let lhs = &self.mass + &s * (0.5 * dt);
                    let rhs = &self.mass * &lambda - (s0 * &lambda) * (0.5 * dt) + (f0 + &f) * (0.5 * dt);
                    solve_spd(lhs, rhs, t)?
                }
                _ => step_linearized(&lambda, dt, &self.mass, &s, &f, t)?,
            };
            dissipation += dt * next.dot(&(&s * &next));
            work += dt * f.dot(&next);
            if self.scheme == TimeScheme::CrankNicolson {
                prev = Some((s, f));
            }
            lambda = next;
            coefficients.push(lambda.as_slice().to_vec());
        }
        let lhs = 0.5 * self.weighted_square(&lambda) + dissipation;
        let rhs = half0 + work;
        Ok((
            ModalTrajectory {
                times: times.to_vec(),
                coefficients,
                dt,
            },
            EnergyBalance {
                lhs,
                rhs,
                residual: lhs - rhs,
            },
        ))
    }
}

/// `G_ij = sum_q w_q A_iq A_jq` with exact symmetry.
fn symmetric_gram(a: &DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    let mut scaled = a.clone();
    for (j, &wj) in w.iter().enumerate() {
        scaled.column_mut(j).scale_mut(wj);
    }
    let mut g = &scaled * a.transpose();
    let n = g.nrows();
    for i in 0..n {
        for j in 0..i {
            g[(i, j)] = g[(j, i)];
        }
    }
    g
}

fn solve_spd(lhs: DMatrix<f64>, rhs: DVector<f64>, t: f64) -> Result<DVector<f64>> {
    let chol: Cholesky<f64, Dyn> = Cholesky::new(lhs).ok_or(Error::LinearSolve { t })?;
    let x = chol.solve(&rhs);
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::LinearSolve { t })
    }
}

/// `M_ij = int rho0 e_i e_j`.
pub fn assemble_mass(profile: &HeightProfile, basis: &GalerkinBasis) -> Result<DMatrix<f64>> {
    Ok(GalerkinSolver::new(profile, basis.n_modes())?.mass)
}

pub fn assemble_stiffness(profile: &HeightProfile, basis: &GalerkinBasis, eta_x: &[f64]) -> Result<DMatrix<f64>> {
    GalerkinSolver::new(profile, basis.n_modes())?.stiffness(eta_x, 0.0)
}

pub fn assemble_forcing(profile: &HeightProfile, basis: &GalerkinBasis, eta_x: &[f64]) -> Result<DVector<f64>> {
    GalerkinSolver::new(profile, basis.n_modes())?.forcing(eta_x, 0.0)
}

/// `lambda_j = (u0, e_j)` in unweighted `L^2`.
pub fn project_initial(u0: &GridFunction, basis: &GalerkinBasis, grid: &Grid) -> DVector<f64> {
    let (values, _) = basis.tabulate(grid);
    let q = simpson_weights(grid);
    let u = u0.values(grid);
    let w: Vec<f64> = q.iter().zip(&u).map(|(a, b)| a * b).collect();
    values * DVector::from_vec(w)
}

/// One implicit Euler step `(M + dt S) lambda' = M lambda + dt F`.
pub fn step_linearized(
    lambda: &DVector<f64>,
    dt: f64,
    mass: &DMatrix<f64>,
    stiffness: &DMatrix<f64>,
    forcing: &DVector<f64>,
    t_next: f64,
) -> Result<DVector<f64>> {
    if !(dt > 0.0) {
        return Err(Error::config("dt", "time step must be positive"));
    }
    let lhs = mass + stiffness * dt;
    let rhs = mass * lambda + forcing * dt;
    solve_spd(lhs, rhs, t_next)
}

/// Solves the linearized problem on `[0, t_final]` with implicit Euler.
pub fn solve_linearized(
    profile: &HeightProfile,
    u0: &GridFunction,
    eta_bar: &FlowHistory,
    t_final: f64,
    dt: f64,
    n_modes: usize,
) -> Result<ModalTrajectory> {
    let solver = GalerkinSolver::new(profile, n_modes)?;
    let times = time_levels(0.0, dt, step_count(t_final, dt)?);
    let lambda0 = solver.project(u0);
    Ok(solver.solve(&lambda0, &times, dt, eta_bar)?.0)
}

/// As [`solve_linearized`], returning the discrete energy balance.
pub fn solve_linearized_balance(
    profile: &HeightProfile,
    u0: &GridFunction,
    eta_bar: &FlowHistory,
    t_final: f64,
    dt: f64,
    n_modes: usize,
) -> Result<EnergyBalance> {
    let solver = GalerkinSolver::new(profile, n_modes)?;
    let times = time_levels(0.0, dt, step_count(t_final, dt)?);
    let lambda0 = solver.project(u0);
    Ok(solver.solve(&lambda0, &times, dt, eta_bar)?.1)
}

/// `T / dt` when it is an integer up to rounding.
pub fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::config("dt", format!("must be positive, got {dt}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::config("t_final", format!("must be positive, got {t_final}")));
    }
    let r = t_final / dt;
    let n = r.round();
    if (r - n).abs() > 8.0 * f64::EPSILON * r.max(1.0) || n < 1.0 {
        return Err(Error::config(
            "dt",
            format!("t_final = {t_final} is not an integer multiple of dt = {dt}"),
        ));
    }
    Ok(n as usize)
}
