//! Mass, stiffness and forcing assembly and the linearized modal solve with
//! its discrete energy balance.

use svfree::galerkin::{neumann_basis, solve_linearized_balance, GalerkinSolver};
use svfree::profile::{build_grid, sample_height_profile, CosineSeries, GridFunction, ProfileKind};
use svfree::trajectory::FlowHistory;

fn main() -> svfree::Result<()> {
    let grid = build_grid(401)?;
    let rho0 = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid)?;
    let basis = neumann_basis(32)?;
    println!("orthonormality defect: {:.2e}", basis.orthonormality_defect(&grid));

    let solver = GalerkinSolver::new(&rho0, 4)?;
    let ones = vec![1.0; grid.n_nodes()];
    println!("M =\n{:.6}", solver.mass());
    println!("S (eta_x = 1) =\n{:.6}", solver.stiffness(&ones, 0.0)?);
    println!("F (eta_x = 1) = {:.6}", solver.forcing(&ones, 0.0)?.transpose());

    // frozen identity flow map: the linearized problem with eta = x
    let u0 = GridFunction::analytic(CosineSeries::single(1.0, 0.3));
    let t_final: f64 = 0.05;
    for dt in [2e-4, 1e-4, 5e-5] {
        let n = (t_final / dt).round() as usize;
        let times: Vec<f64> = (0..=n).map(|k| k as f64 * dt).collect();
        let flow = FlowHistory::identity(&grid, times);
        let b = solve_linearized_balance(&rho0, &u0, &flow, t_final, dt, 32)?;
        println!("dt = {dt:.0e}: energy balance residual {:+.3e}", b.residual);
    }
    Ok(())
}
