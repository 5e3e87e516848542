//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Exits 0 after printing every line; set `ACCEPTANCE_STRICT=1` to exit 1
//! when any criterion fails.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use svfree::eulerian::{eulerian_fields, is_spectral};
use svfree::galerkin::{solve_linearized_balance, GalerkinSolver};
use svfree::jet::{low_energy_of_difference, EnergyMonitor, JetMethod};
use svfree::picard::{contraction_metrics, fd_oracle_solve, solve_nonlinear};
use svfree::profile::{build_grid, sample_height_profile, CosineSeries, GridFunction, ProfileKind};
use svfree::run::{mass_drift, snapshot_indices, trajectory_diff};
use svfree::verify::identity_gap;
use svfree::{InitialGuess, Problem, Result};

struct Line {
    id: usize,
    pass: bool,
    text: String,
}

fn line(id: usize, pass: bool, text: impl Into<String>) -> Line {
    Line {
        id,
        pass,
        text: text.into(),
    }
}

fn ac1() -> Result<Line> {
    let start = Instant::now();
    let traj = solve_nonlinear(&Problem::canonical())?;
    let secs = start.elapsed().as_secs_f64();
    let (lo, hi) = traj.eta_x_range();
    Ok(line(
        1,
        lo >= 0.5 && hi <= 1.5 && secs < 60.0,
        format!("flow-map bound: eta_x in [{lo:.6}, {hi:.6}] (need [0.5, 1.5]), {secs:.2} s (need < 60 s)"),
    ))
}

fn ac2() -> Result<Line> {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [0.0125, 0.025] {
        let traj = solve_nonlinear(&Problem::canonical().with_t_final(t))?;
        let h = &traj.convergence.history;
        let ratios: Vec<f64> = h.iter().filter_map(|c| c.ratio).collect();
        let monotone = h.windows(2).all(|w| w[1].total() < w[0].total());
        let below = ratios.iter().all(|&r| r < 0.9);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        ok &= monotone && below && !ratios.is_empty();
        if t == 0.0125 {
            ok &= min <= 0.6;
        }
        parts.push(format!(
            "T={t}: ratios {} (monotone {monotone})",
            ratios.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>().join(" ")
        ));
    }
    Ok(line(
        2,
        ok,
        format!("Picard contraction, ratio < 0.9 from iteration 2, <= 0.6 at T=0.0125: {}", parts.join("; ")),
    ))
}

fn ac3() -> Result<Line> {
    let fine = identity_gap(401)?;
    let coarse = identity_gap(101)?;
    let shrink = coarse / fine;
    Ok(line(
        3,
        fine <= 1e-8 && shrink >= 16.0,
        format!("interpolation identities: gap {fine:.3e} at n=401 (need <= 1e-8), shrink {shrink:.1}x from n=101 (need >= 16x)"),
    ))
}

fn ac4() -> Result<Line> {
    let p = Problem::canonical();
    let flow = solve_nonlinear(&p)?.flow;
    let u0 = GridFunction::Analytic(p.u0.clone());
    let scale = p.profile.weighted_square(&u0.values(p.profile.grid()), 1) + p.t_final;
    let r1 = solve_linearized_balance(&p.profile, &u0, &flow, p.t_final, p.dt, p.n_modes)?.residual.abs();
    let r2 = solve_linearized_balance(&p.profile, &u0, &flow, p.t_final, p.dt / 2.0, p.n_modes)?.residual.abs();
    let limit = 5.0 * p.dt * scale;
    let ratio = r1 / r2;
    Ok(line(
        4,
        r1 <= limit && ratio >= 1.8,
        format!("energy identity: residual {r1:.3e} (need <= {limit:.3e}), dt/2 ratio {ratio:.3} (need ~2, >= 1.8)"),
    ))
}

fn ac5() -> Result<Line> {
    let profile = sample_height_profile(ProfileKind::Parabolic, &[1.0], &build_grid(401)?)?;
    let solver = GalerkinSolver::new(&profile, 2)?;
    let m00 = solver.mass()[(0, 0)];
    let s11 = solver.stiffness(&vec![1.0; 401], 0.0)?[(1, 1)];
    let em = (m00 - 1.0 / 6.0).abs();
    let es = (s11 - (PI * PI / 6.0 + 0.5)).abs();
    Ok(line(
        5,
        em <= 1e-8 && es <= 1e-8,
        format!("closed-form assembly: |M_00 - 1/6| = {em:.2e}, |S_11 - (pi^2/6 + 1/2)| = {es:.2e} (need <= 1e-8)"),
    ))
}

fn oracle_gap(n_nodes: usize, n_modes: usize, dt: f64) -> Result<f64> {
    let grid = build_grid(n_nodes)?;
    let profile = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid)?;
    let p = Problem::new(profile, Arc::new(CosineSeries::zero()))
        .with_t_final(0.02)
        .with_dt(dt)
        .with_modes(n_modes);
    let g = solve_nonlinear(&p)?;
    let f = fd_oracle_solve(&p)?;
    Ok(trajectory_diff(&p, &g, &f).last().expect("non-empty").1)
}

fn ac6() -> Result<Line> {
    let coarse = oracle_gap(401, 32, 1e-4)?;
    let fine = oracle_gap(801, 64, 5e-5)?;
    let gain = coarse / fine;
    Ok(line(
        6,
        gain >= 2.0,
        format!("oracle equivalence at T=0.02: weighted L2 gap {coarse:.3e} -> {fine:.3e} under joint refinement, gain {gain:.2}x (need >= 2x)"),
    ))
}

fn fd_boundary_vx(n_nodes: usize) -> Result<f64> {
    let grid = build_grid(n_nodes)?;
    let profile = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid)?;
    let p = Problem::new(profile, Arc::new(CosineSeries::zero()));
    let f = fd_oracle_solve(&p)?;
    Ok((0..f.n_times())
        .map(|k| f.velocity_x_at(k, 0.0).abs().max(f.velocity_x_at(k, 1.0).abs()))
        .fold(0.0, f64::max))
}

fn ac7() -> Result<Line> {
    let p = Problem::canonical();
    let g = solve_nonlinear(&p)?;
    let snaps = snapshot_indices(g.n_times(), 11)
        .into_iter()
        .map(|k| eulerian_fields(&p.profile, &g, k, 401))
        .collect::<Result<Vec<_>>>()?;
    let drift = mass_drift(&snaps).unwrap_or(f64::NAN);
    let spectral = (0..g.n_times())
        .map(|k| g.velocity_x_at(k, 0.0).abs().max(g.velocity_x_at(k, 1.0).abs()))
        .fold(0.0, f64::max);
    let (h1, h2) = (1.0 / 400.0, 1.0 / 800.0);
    let (fd1, fd2) = (fd_boundary_vx(401)?, fd_boundary_vx(801)?);
    let ok = drift <= 1e-6 && is_spectral(&g) && spectral == 0.0 && fd1 <= 10.0 * h1 * h1 && fd2 <= 10.0 * h2 * h2 && fd2 < fd1;
    Ok(line(
        7,
        ok,
        format!(
            "conservation and boundary: mass drift {drift:.2e} (need <= 1e-6), spectral |v_x| at ends {spectral:e} (need 0), \
             FD |v_x| {fd1:.2e} (n=401, 10h^2 = {:.2e}) -> {fd2:.2e} (n=801, 10h^2 = {:.2e})",
            10.0 * h1 * h1,
            10.0 * h2 * h2
        ),
    ))
}

fn ac8() -> Result<Line> {
    let p = Problem::canonical();
    let g = solve_nonlinear(&p)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for method in [JetMethod::Pointwise, JetMethod::Galerkin] {
        let monitor = EnergyMonitor::new(&p.profile, p.u0.as_ref(), &g, method)?;
        let reports = monitor.reports(&g, 1)?;
        let all = reports.iter().all(|r| r.within_apriori);
        let worst = reports.iter().skip(1).map(|r| r.e_total).fold(0.0, f64::max);
        ok &= all && reports.len() == g.n_times();
        parts.push(format!(
            "{method:?}: M0 = {:.4e}, max E(t>0) = {worst:.4e}, within_apriori at {}/{} steps",
            monitor.m0,
            reports.iter().filter(|r| r.within_apriori).count(),
            reports.len()
        ));
    }
    Ok(line(8, ok, format!("a priori ceiling E <= 2 M0: {}", parts.join("; "))))
}

fn ac9() -> Result<Line> {
    let base = Problem::canonical().with_u0(Arc::new(CosineSeries::single(1.0, 0.5)));
    let a = solve_nonlinear(&base)?;
    let b = solve_nonlinear(&base.clone().with_initial_guess(InitialGuess::Identity))?;
    let monitor = EnergyMonitor::new(&base.profile, base.u0.as_ref(), &a, JetMethod::Pointwise)?;
    let mut worst = 0.0_f64;
    for k in 0..a.n_times() {
        let d = low_energy_of_difference(&base.profile, &monitor.derivatives(&a, k)?, &monitor.derivatives(&b, k)?);
        worst = worst.max(d.sqrt());
    }
    let contraction = contraction_metrics(a.modal().expect("modal"), b.modal().expect("modal"), &base.profile)?.total();
    let limit = 10.0 * base.picard_tol;
    Ok(line(
        9,
        worst < limit,
        format!(
            "uniqueness probe (u0 = 0.5 cos(pi x), from-velocity vs identity guess): max_t sqrt(lowE(delta)) = {worst:.3e} \
             (need < {limit:.1e}); contraction-norm of delta {contraction:.3e}"
        ),
    ))
}

fn main() {
    let criteria: [fn() -> Result<Line>; 9] = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let l = c().unwrap_or_else(|e| line(i + 1, false, format!("error: {e}")));
        if !l.pass {
            failures += 1;
        }
        println!("AC{} {}  {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.text);
    }
    println!("acceptance: {}/9 criteria pass", 9 - failures);
    if failures > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
