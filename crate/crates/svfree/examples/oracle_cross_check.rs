//! Galerkin/Picard against the independent finite-volume solver under joint
//! refinement.

use std::sync::Arc;

use svfree::oracle::fd_oracle_solve;
use svfree::picard::solve_nonlinear;
use svfree::profile::{build_grid, sample_height_profile, CosineSeries, ProfileKind};
use svfree::run::trajectory_diff;
use svfree::Problem;

fn main() -> svfree::Result<()> {
    for (n_nodes, n_modes, dt) in [(201, 16, 2e-4), (401, 32, 1e-4), (801, 64, 5e-5)] {
        let rho0 = sample_height_profile(ProfileKind::Parabolic, &[1.0], &build_grid(n_nodes)?)?;
        let p = Problem::new(rho0, Arc::new(CosineSeries::zero()))
            .with_t_final(0.02)
            .with_dt(dt)
            .with_modes(n_modes);
        let (g, f) = rayon::join(|| solve_nonlinear(&p), || fd_oracle_solve(&p));
        let (g, f) = (g?, f?);
        let (t, l2, sup) = *trajectory_diff(&p, &g, &f).last().expect("stored times");
        println!("n = {n_nodes:>3}, N = {n_modes:>2}, dt = {dt:.0e}: at t = {t}, weighted L2 {l2:.3e}, sup {sup:.3e}");
    }
    Ok(())
}
