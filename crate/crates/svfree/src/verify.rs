//! The `verify` suite: a named pass/fail table over the library's checks.

use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::Result;
use crate::eulerian::{eulerian_fields, inverse_flow};
use crate::galerkin::{solve_linearized_balance, GalerkinBasis, GalerkinSolver};
use crate::picard::solve_nonlinear;
use crate::profile::{build_grid, sample_height_profile, Analytic, CosineSeries, GridFunction, HeightProfile, Polynomial, ProfileKind};
use crate::report;
use crate::run::{energy_along, mass_drift, snapshot_indices};
use crate::trajectory::{FlowHistory, ETA_BOUND};
use crate::weighted::{
    check_h_half_weighted, check_interpolation_identity, check_interpolation_inequality, check_sobolev_embedding,
    check_weighted_sobolev, RatioReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// The measured quantity, compared against `threshold`.
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check.
    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            s.push_str(&format!(
                "{tag}  {:<34} {:>12.4e} (limit {:.3e})  {}\n",
                c.name, c.value, c.threshold, c.detail
            ));
        }
        s
    }
}

fn upper(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: if value <= threshold { Status::Pass } else { Status::Fail },
        value,
        threshold,
        detail: detail.into(),
    }
}

fn lower(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: if value >= threshold { Status::Pass } else { Status::Fail },
        value,
        threshold,
        detail: detail.into(),
    }
}

fn failed(name: &str, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: Status::Fail,
        value: f64::NAN,
        threshold: f64::NAN,
        detail: detail.into(),
    }
}

fn skipped(name: &str, detail: &str) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: Status::Skip,
        value: f64::NAN,
        threshold: f64::NAN,
        detail: detail.into(),
    }
}

/// `{1, x, x^2, cos(n pi x) : n <= 8}`.
pub fn test_family() -> Vec<(String, Arc<dyn Analytic>)> {
    let mut f: Vec<(String, Arc<dyn Analytic>)> = vec![
        ("1".into(), Arc::new(Polynomial::new(vec![1.0]))),
        ("x".into(), Arc::new(Polynomial::new(vec![0.0, 1.0]))),
        ("x^2".into(), Arc::new(Polynomial::new(vec![0.0, 0.0, 1.0]))),
    ];
    for n in 1..=8 {
        f.push((format!("cos({n}pi x)"), Arc::new(CosineSeries::single(n as f64, 1.0))));
    }
    f
}

/// Largest relative change of the empirical constants between two grids.
fn constant_drift(
    kind: ProfileKind,
    params: &[f64],
    check: impl Fn(&GridFunction, &HeightProfile) -> Result<RatioReport>,
) -> Result<(f64, f64)> {
    let coarse = sample_height_profile(kind, params, &build_grid(201)?)?;
    let fine = sample_height_profile(kind, params, &build_grid(401)?)?;
    let mut drift = 0.0_f64;
    let mut largest = 0.0_f64;
    for (_, f) in test_family() {
        let g = GridFunction::Analytic(f);
        let a = check(&g, &coarse)?.empirical_constant.unwrap_or(0.0);
        let b = check(&g, &fine)?.empirical_constant.unwrap_or(0.0);
        largest = largest.max(b);
        if b > 0.0 {
            drift = drift.max((a - b).abs() / b);
        }
    }
    Ok((drift, largest))
}

/// Largest identity gap over `{1, x, x^2, cos(pi x), cos(3 pi x)}` on the distance profile.
pub fn identity_gap(n_nodes: usize) -> Result<f64> {
    let profile = sample_height_profile(ProfileKind::Distance, &[], &build_grid(n_nodes)?)?;
    let family: [Arc<dyn Analytic>; 5] = [
        Arc::new(Polynomial::new(vec![1.0])),
        Arc::new(Polynomial::new(vec![0.0, 1.0])),
        Arc::new(Polynomial::new(vec![0.0, 0.0, 1.0])),
        Arc::new(CosineSeries::single(1.0, 1.0)),
        Arc::new(CosineSeries::single(3.0, 1.0)),
    ];
    let mut gap = 0.0_f64;
    for f in family {
        gap = gap.max(check_interpolation_identity(&GridFunction::Analytic(f), &profile)?.max_gap());
    }
    Ok(gap)
}

fn or_fail(name: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| failed(name, e.to_string()))
}

/// Runs every check for the given config. The table is also written to
/// `verify.json` in the output directory.
pub fn run_verification_suite(config: &RunConfig) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let problem = match config.problem() {
        Ok(p) => {
            checks.push(upper(
                "physical_vacuum",
                p.profile.value_at(0.0).abs().max(p.profile.value_at(1.0).abs()),
                0.0,
                format!("rho0 vanishes at both ends, c1 = {:.4}, c2 = {:.4}", p.profile.c1(), p.profile.c2()),
            ));
            Some(p)
        }
        Err(e) => {
            checks.push(failed("physical_vacuum", e.to_string()));
            None
        }
    };
    let kind = config.profile.kind;
    let params = config.profile.params.clone();

    checks.push(or_fail(
        "basis_orthonormality",
        (|| {
            let defect = GalerkinBasis::new(config.n_modes)?.orthonormality_defect(&build_grid(config.n_nodes)?);
            Ok(upper("basis_orthonormality", defect, 1e-10, format!("{} modes", config.n_modes)))
        })(),
    ));
    checks.push(or_fail(
        "assembly_closed_forms",
        (|| {
            let profile = sample_height_profile(ProfileKind::Parabolic, &[1.0], &build_grid(401)?)?;
            let solver = GalerkinSolver::new(&profile, 2)?;
            let s = solver.stiffness(&vec![1.0; 401], 0.0)?;
            let e_m = (solver.mass()[(0, 0)] - 1.0 / 6.0).abs();
            let pi2 = std::f64::consts::PI.powi(2);
            let e_s = (s[(1, 1)] - (pi2 / 6.0 + 0.5)).abs();
            Ok(upper("assembly_closed_forms", e_m.max(e_s), 1e-8, "M_00 = 1/6, S_11 = pi^2/6 + 1/2"))
        })(),
    ));
    if problem.is_some() {
        let ratio_checks: [(&str, fn(&GridFunction, &HeightProfile) -> Result<RatioReport>); 5] = [
            ("weighted_sobolev_k0_stability", |g, p| check_weighted_sobolev(g, 0, p)),
            ("weighted_sobolev_k1_stability", |g, p| check_weighted_sobolev(g, 1, p)),
            ("h_half_weighted_stability", check_h_half_weighted),
            ("interpolation_inequality_stability", check_interpolation_inequality),
            ("sobolev_embedding_stability", check_sobolev_embedding),
        ];
        for (name, check) in ratio_checks {
            checks.push(or_fail(
                name,
                constant_drift(kind, &params, check).map(|(drift, c)| {
                    upper(name, drift, 0.01, format!("constants n=201 vs 401, largest {c:.4}"))
                }),
            ));
        }
    } else {
        for name in [
            "weighted_sobolev_k0_stability",
            "weighted_sobolev_k1_stability",
            "h_half_weighted_stability",
            "interpolation_inequality_stability",
            "sobolev_embedding_stability",
        ] {
            checks.push(skipped(name, "needs a valid profile"));
        }
    }
    checks.push(or_fail(
        "interpolation_identities",
        identity_gap(401).map(|g| upper("interpolation_identities", g, 1e-8, "distance profile, n=401")),
    ));
    checks.push(or_fail(
        "interpolation_identity_refinement",
        (|| {
            let fine = identity_gap(401)?;
            let shrink = (identity_gap(51)? / fine).min(identity_gap(101)? / fine);
            Ok(lower(
                "interpolation_identity_refinement",
                shrink,
                16.0,
                "gap shrink from n=51 and n=101 to n=401",
            ))
        })(),
    ));

    let Some(problem) = problem else {
        for name in [
            "energy_balance",
            "eta_bound",
            "contraction_monotone",
            "neumann_boundary",
            "mass_conservation",
            "inverse_map_roundtrip",
            "apriori_energy",
        ] {
            checks.push(skipped(name, "needs a valid profile"));
        }
        return finish(config, checks);
    };

    checks.push(or_fail("energy_balance", energy_balance_check(&problem)));

    match solve_nonlinear(&problem) {
        Err(e) => {
            checks.push(failed("eta_bound", e.to_string()));
            for name in ["contraction_monotone", "neumann_boundary", "mass_conservation", "inverse_map_roundtrip", "apriori_energy"] {
                checks.push(skipped(name, "nonlinear solve failed"));
            }
        }
        Ok(traj) => {
            let (lo, hi) = traj.eta_x_range();
            checks.push(CheckResult {
                name: "eta_bound".into(),
                status: if lo >= ETA_BOUND.0 && hi <= ETA_BOUND.1 { Status::Pass } else { Status::Fail },
                value: (lo - 1.0).abs().max((hi - 1.0).abs()),
                threshold: 0.5,
                detail: format!("eta_x in [{lo:.6}, {hi:.6}]"),
            });
            let h = &traj.convergence.history;
            let monotone = h.windows(2).all(|w| w[1].total() < w[0].total());
            let worst = h.iter().filter_map(|c| c.ratio).fold(0.0, f64::max);
            checks.push(CheckResult {
                name: "contraction_monotone".into(),
                status: if monotone && worst < 0.9 { Status::Pass } else { Status::Fail },
                value: worst,
                threshold: 0.9,
                detail: format!("{} iterations, differences decreasing: {monotone}", h.len()),
            });
            let vx = (0..traj.n_times())
                .map(|k| traj.velocity_x_at(k, 0.0).abs().max(traj.velocity_x_at(k, 1.0).abs()))
                .fold(0.0, f64::max);
            checks.push(upper("neumann_boundary", vx, 0.0, "max |v_x| at both ends over all steps"));
            checks.push(or_fail(
                "mass_conservation",
                snapshot_indices(traj.n_times(), config.n_snapshots.max(2))
                    .iter()
                    .map(|&k| eulerian_fields(&problem.profile, &traj, k, config.n_samples.max(401)))
                    .collect::<Result<Vec<_>>>()
                    .map(|s| upper("mass_conservation", mass_drift(&s).unwrap_or(0.0), 1e-6, "relative Eulerian mass drift")),
            ));
            checks.push(or_fail(
                "inverse_map_roundtrip",
                (|| {
                    let k = traj.n_times() - 1;
                    let (a, b) = (traj.eta_at(k, 0.0), traj.eta_at(k, 1.0));
                    let mut worst = 0.0_f64;
                    for i in 0..=200 {
                        let y = a + (b - a) * i as f64 / 200.0;
                        let x = inverse_flow(&traj, k, y)?;
                        worst = worst.max((traj.eta_at(k, x) - y).abs());
                    }
                    Ok(upper("inverse_map_roundtrip", worst, 1e-10, "|eta(eta^-1(y)) - y| at the final time"))
                })(),
            ));
            checks.push(or_fail(
                "apriori_energy",
                energy_along(&problem, &traj, config.jet_method, config.energy_stride).map(|(m0, reports)| {
                    let worst = reports.iter().map(|r| r.e_total).fold(0.0, f64::max);
                    let ok = reports.iter().all(|r| r.within_apriori);
                    CheckResult {
                        name: "apriori_energy".into(),
                        status: if ok { Status::Pass } else { Status::Fail },
                        value: worst,
                        threshold: 2.0 * m0,
                        detail: format!("max E over {} steps against 2 M0", reports.len()),
                    }
                }),
            ));
        }
    }
    finish(config, checks)
}

/// Residual of the discrete energy identity of the linearized solve with the
/// identity flow map, and its ratio when `dt` halves.
fn energy_balance_check(problem: &crate::problem::Problem) -> Result<CheckResult> {
    let u0 = GridFunction::Analytic(problem.u0.clone());
    let grid = problem.profile.grid();
    let times = problem.times()?;
    let flow = FlowHistory::identity(grid, times);
    let scale = problem.profile.weighted_square(&u0.values(grid), 1) + problem.t_final;
    let r1 = solve_linearized_balance(&problem.profile, &u0, &flow, problem.t_final, problem.dt, problem.n_modes)?;
    let r2 = solve_linearized_balance(&problem.profile, &u0, &flow, problem.t_final, problem.dt / 2.0, problem.n_modes)?;
    let limit = 5.0 * problem.dt * scale;
    let ratio = r1.residual.abs() / r2.residual.abs();
    let mut c = upper(
        "energy_balance",
        r1.residual.abs(),
        limit,
        format!("|residual| vs 5 dt (|sqrt(rho0) u0|^2 + T); halves when dt halves: ratio {ratio:.3}"),
    );
    if !(ratio >= 1.8) && c.status == Status::Pass && r1.residual.abs() > 1e-14 {
        c.status = Status::Fail;
    }
    Ok(c)
}

fn finish(config: &RunConfig, checks: Vec<CheckResult>) -> Result<VerificationReport> {
    let report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        checks,
    };
    let dir: &Path = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|source| crate::Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    report::write_json(&dir.join("verify.json"), &report)?;
    Ok(report)
}
