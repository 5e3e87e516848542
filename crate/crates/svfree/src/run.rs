//! `simulate` and `sweep` orchestration.

use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, SolverChoice, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::eulerian::{boundary_diagnostics, eulerian_fields, BoundaryReport, EulerianSnapshot};
use crate::jet::{EnergyMonitor, EnergyReport, JetMethod};
use crate::oracle::fd_oracle_solve;
use crate::picard::{solve_nonlinear, ContractionReport};
use crate::problem::Problem;
use crate::report;
use crate::trajectory::SolutionTrajectory;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub solver: SolverChoice,
    pub converged: bool,
    pub iterations: usize,
    pub final_ratio: Option<f64>,
    pub min_eta_x: Option<f64>,
    pub max_eta_x: Option<f64>,
    /// Largest `|E_total - lowE_total|` over reported steps where both are finite.
    pub max_energy_gap: Option<f64>,
    pub jet_method: JetMethod,
    pub m0: Option<f64>,
    pub within_apriori: Option<bool>,
    /// Relative Eulerian mass change over the snapshots.
    pub mass_drift: Option<f64>,
    /// `|sqrt(rho0) (v_galerkin - v_fd)|` at the final time (`solver = both`).
    pub oracle_diff: Option<f64>,
    pub t_final: f64,
    pub n_steps: usize,
    pub wall_time_s: f64,
    pub error: Option<String>,
    pub files: Vec<String>,
}

impl RunSummary {
    fn new(config: &RunConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            solver: config.solver,
            converged: false,
            iterations: 0,
            final_ratio: None,
            min_eta_x: None,
            max_eta_x: None,
            max_energy_gap: None,
            jet_method: config.jet_method,
            m0: None,
            within_apriori: None,
            mass_drift: None,
            oracle_diff: None,
            t_final: config.t_final,
            n_steps: config.n_steps().unwrap_or(0),
            wall_time_s: 0.0,
            error: None,
            files: Vec::new(),
        }
    }
}

struct Emitter<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Emitter<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }
}

/// Evenly spaced stored-time indices, first and last included.
pub fn snapshot_indices(n_times: usize, count: usize) -> Vec<usize> {
    if n_times == 0 || count == 0 {
        return Vec::new();
    }
    let last = n_times - 1;
    let count = count.min(n_times);
    if count == 1 {
        return vec![last];
    }
    let mut ks: Vec<usize> = (0..count)
        .map(|i| ((i * last) as f64 / (count - 1) as f64).round() as usize)
        .collect();
    ks.dedup();
    ks
}

fn strided(n_times: usize, stride: usize) -> Vec<usize> {
    let last = n_times - 1;
    let mut ks: Vec<usize> = (0..=last).step_by(stride.max(1)).collect();
    if ks.last() != Some(&last) {
        ks.push(last);
    }
    ks
}

/// Energy reports along a Galerkin trajectory; violations of the ceiling
/// are logged at warn level.
pub fn energy_along(problem: &Problem, traj: &SolutionTrajectory, method: JetMethod, stride: usize) -> Result<(f64, Vec<EnergyReport>)> {
    let monitor = EnergyMonitor::new(&problem.profile, problem.u0.as_ref(), traj, method)?;
    let reports = monitor.reports(traj, stride)?;
    for r in reports.iter().filter(|r| !r.within_apriori) {
        warn!("a priori ceiling exceeded at t = {}: E = {:e} > 2 M0 = {:e}", r.t, r.e_total, 2.0 * r.m0);
    }
    Ok((monitor.m0, reports))
}

/// `|sqrt(rho0) (a - b)|` and `max |a - b|` at every common stored time.
pub fn trajectory_diff(problem: &Problem, a: &SolutionTrajectory, b: &SolutionTrajectory) -> Vec<(f64, f64, f64)> {
    (0..a.n_times().min(b.n_times()))
        .map(|k| {
            let d: Vec<f64> = a
                .velocity_nodal(k)
                .iter()
                .zip(b.velocity_nodal(k))
                .map(|(p, q)| p - q)
                .collect();
            let sup = d.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            (a.times[k], problem.profile.weighted_square(&d, 1).sqrt(), sup)
        })
        .collect()
}

/// Relative change of the Eulerian mass across snapshots.
pub fn mass_drift(snapshots: &[EulerianSnapshot]) -> Option<f64> {
    let m0 = snapshots.first()?.mass();
    Some(snapshots.iter().map(|s| (s.mass() - m0).abs() / m0).fold(0.0, f64::max))
}

/// Runs the configured solver(s) and writes the requested reports into the
/// output directory. On failure the partial reports and `summary.json`
/// (with the error message) are still written before the error is returned.
pub fn run_simulation(config: &RunConfig) -> Result<RunSummary> {
    let start = Instant::now();
    config.validate()?;
    let problem = config.problem()?;
    let dir = config.output_dir.as_path();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = Emitter { dir, files: Vec::new() };
    let mut summary = RunSummary::new(config);
    let result = simulate_into(config, &problem, &mut out, &mut summary);
    summary.wall_time_s = start.elapsed().as_secs_f64();
    if let Err(e) = &result {
        summary.error = Some(e.to_string());
    }
    summary.files = out.files.clone();
    summary.files.push("summary.json".into());
    report::write_json(&dir.join("summary.json"), &summary)?;
    result.map(|()| summary)
}

fn simulate_into(config: &RunConfig, problem: &Problem, out: &mut Emitter, summary: &mut RunSummary) -> Result<()> {
    let (galerkin, fd) = match config.solver {
        SolverChoice::Galerkin => (Some(solve_nonlinear(problem)), None),
        SolverChoice::FdOracle => (None, Some(fd_oracle_solve(problem))),
        SolverChoice::Both => {
            let (g, f) = rayon::join(|| solve_nonlinear(problem), || fd_oracle_solve(problem));
            (Some(g), Some(f))
        }
    };
    let galerkin = match galerkin {
        Some(Err(e)) => {
            if let Error::NonConvergence { history } = &e {
                summary.iterations = history.len();
                summary.final_ratio = history.last().and_then(|c| c.ratio);
                if config.emit.contraction {
                    report::write_contraction(&out.path("contraction.csv"), history)?;
                }
            }
            return Err(e);
        }
        Some(Ok(t)) => Some(t),
        None => None,
    };
    let fd = fd.transpose()?;
    let primary = galerkin.as_ref().or(fd.as_ref()).expect("at least one solver ran");
    summary.converged = true;
    let (lo, hi) = primary.eta_x_range();
    summary.min_eta_x = Some(lo);
    summary.max_eta_x = Some(hi);
    let snaps = snapshot_indices(primary.n_times(), config.n_snapshots);

    if let Some(g) = &galerkin {
        summary.iterations = g.convergence.iterations;
        summary.final_ratio = g.convergence.history.last().and_then(|c| c.ratio);
        if config.emit.contraction {
            report::write_contraction(&out.path("contraction.csv"), &g.convergence.history)?;
        }
        report::write_trajectory(&out.path("trajectory_galerkin.csv"), g, &snaps)?;
    }
    if let Some(f) = &fd {
        report::write_trajectory(&out.path("trajectory_fd.csv"), f, &snaps)?;
    }
    if let (Some(g), Some(f)) = (&galerkin, &fd) {
        let diff = trajectory_diff(problem, g, f);
        summary.oracle_diff = diff.last().map(|d| d.1);
        report::write_rows(
            &out.path("diff.csv"),
            &["t", "weighted_l2", "sup"],
            diff.iter().map(|(t, l2, sup)| [*t, *l2, *sup].map(report::format_float)),
        )?;
    }

    if config.emit.energy {
        if let Some(g) = &galerkin {
            let (m0, reports) = energy_along(problem, g, config.jet_method, config.energy_stride)?;
            summary.m0 = Some(m0);
            summary.within_apriori = Some(reports.iter().all(|r| r.within_apriori));
            summary.max_energy_gap = reports
                .iter()
                .filter(|r| r.e_total.is_finite() && r.low_e_total.is_finite())
                .map(|r| (r.e_total - r.low_e_total).abs())
                .reduce(f64::max);
            report::write_energy(&out.path("energy.csv"), &reports)?;
        } else {
            info!("energy report needs the Galerkin solution; skipped");
        }
    }
    if config.emit.boundary {
        let reports: Vec<BoundaryReport> = strided(primary.n_times(), config.energy_stride)
            .into_iter()
            .map(|k| boundary_diagnostics(&problem.profile, primary, k))
            .collect();
        report::write_boundary(&out.path("boundary.csv"), &reports)?;
    }
    if config.emit.snapshots {
        let snapshots = snaps
            .iter()
            .map(|&k| eulerian_fields(&problem.profile, primary, k, config.n_samples))
            .collect::<Result<Vec<_>>>()?;
        summary.mass_drift = mass_drift(&snapshots);
        report::write_snapshots(&out.path("snapshots.csv"), &out.path("snapshots.json"), &snapshots)?;
    }
    Ok(())
}

/// One point of a final-time sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub t_final: f64,
    pub n_steps: usize,
    pub converged: bool,
    pub iterations: usize,
    pub final_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub min_eta_x: Option<f64>,
    pub max_eta_x: Option<f64>,
    pub within_apriori: Option<bool>,
    pub error: Option<String>,
}

/// Parses `T=a:b:n` into `n` evenly spaced final times.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::config("sweep", format!("{m} (expected T=a:b:n), got `{spec}`"));
    let range = spec
        .strip_prefix("T=")
        .or_else(|| spec.strip_prefix("t_final="))
        .ok_or_else(|| bad("unknown sweep variable"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad("need three fields"));
    };
    let a: f64 = a.parse().map_err(|_| bad("bad start"))?;
    let b: f64 = b.parse().map_err(|_| bad("bad end"))?;
    let n: usize = n.parse().map_err(|_| bad("bad count"))?;
    if !(a > 0.0 && b >= a && b.is_finite()) || n == 0 {
        return Err(bad("need 0 < a <= b and n >= 1"));
    }
    Ok((0..n)
        .map(|i| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect())
}

fn sweep_point(config: &RunConfig, t_final: f64) -> SweepPoint {
    let n_steps = ((t_final / config.dt).round() as usize).max(1);
    let mut c = config.clone();
    c.t_final = n_steps as f64 * config.dt;
    let mut point = SweepPoint {
        t_final: c.t_final,
        n_steps,
        converged: false,
        iterations: 0,
        final_ratio: None,
        max_ratio: None,
        min_eta_x: None,
        max_eta_x: None,
        within_apriori: None,
        error: None,
    };
    let ratios = |h: &[ContractionReport]| (h.last().and_then(|c| c.ratio), h.iter().filter_map(|c| c.ratio).reduce(f64::max));
    let solved = c.problem().and_then(|p| solve_nonlinear(&p).map(|t| (p, t)));
    match solved {
        Ok((problem, traj)) => {
            point.converged = true;
            point.iterations = traj.convergence.iterations;
            (point.final_ratio, point.max_ratio) = ratios(&traj.convergence.history);
            let (lo, hi) = traj.eta_x_range();
            point.min_eta_x = Some(lo);
            point.max_eta_x = Some(hi);
            if c.emit.energy {
                match energy_along(&problem, &traj, c.jet_method, c.energy_stride) {
                    Ok((_, reports)) => point.within_apriori = Some(reports.iter().all(|r| r.within_apriori)),
                    Err(e) => point.error = Some(e.to_string()),
                }
            }
        }
        Err(e) => {
            if let Error::NonConvergence { history } = &e {
                point.iterations = history.len();
                (point.final_ratio, point.max_ratio) = ratios(history);
            }
            if let Error::EtaBound { min_eta_x, max_eta_x, .. } = &e {
                point.min_eta_x = Some(*min_eta_x);
                point.max_eta_x = Some(*max_eta_x);
            }
            point.error = Some(e.to_string());
        }
    }
    point
}

/// Reruns the nonlinear solve for each final time (snapped to a multiple of
/// `dt`) in parallel and writes `sweep.csv` and `sweep.json`.
pub fn run_sweep(config: &RunConfig, t_values: &[f64]) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    let points: Vec<SweepPoint> = t_values.par_iter().map(|&t| sweep_point(config, t)).collect();
    for p in points.iter().filter(|p| p.within_apriori == Some(false)) {
        warn!("a priori ceiling exceeded in the sweep point T = {}", p.t_final);
    }
    let dir = config.output_dir.as_path();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let opt = |v: Option<f64>| v.map(report::format_float).unwrap_or_default();
    report::write_rows(
        &dir.join("sweep.csv"),
        &[
            "t_final",
            "n_steps",
            "converged",
            "iterations",
            "final_ratio",
            "max_ratio",
            "min_eta_x",
            "max_eta_x",
            "within_apriori",
            "error",
        ],
        points.iter().map(|p| {
            vec![
                report::format_float(p.t_final),
                p.n_steps.to_string(),
                p.converged.to_string(),
                p.iterations.to_string(),
                opt(p.final_ratio),
                opt(p.max_ratio),
                opt(p.min_eta_x),
                opt(p.max_eta_x),
                p.within_apriori.map(|b| b.to_string()).unwrap_or_default(),
                p.error.clone().unwrap_or_default(),
            ]
        }),
    )?;
    report::write_json(&dir.join("sweep.json"), &points)?;
    Ok(points)
}
