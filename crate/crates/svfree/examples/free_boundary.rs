//! The moving interval, Eulerian height and velocity, and what happens at the
//! vacuum boundary.

use std::sync::Arc;

use svfree::eulerian::{boundary_diagnostics, eulerian_fields};
use svfree::picard::solve_nonlinear;
use svfree::profile::CosineSeries;
use svfree::run::snapshot_indices;
use svfree::Problem;

fn main() -> svfree::Result<()> {
    let p = Problem::canonical().with_u0(Arc::new(CosineSeries::single(1.0, 0.5)));
    let traj = solve_nonlinear(&p)?;
    let mass0 = p.profile.mass();
    println!("{:>6} {:>20} {:>20} {:>10} {:>8} {:>8}", "t", "I(t)", "boundary speed", "mass err", "slope", "v_x");
    for k in snapshot_indices(traj.n_times(), 6) {
        let s = eulerian_fields(&p.profile, &traj, k, 401)?;
        let b = boundary_diagnostics(&p.profile, &traj, k);
        println!(
            "{:>6.3} ({:+.5}, {:.5}) ({:+.5}, {:+.5}) {:>10.2e} {:>8.4} {:>8.1e}",
            s.t,
            s.boundary.0,
            s.boundary.1,
            s.boundary_velocity.0,
            s.boundary_velocity.1,
            s.mass() - mass0,
            b.soundspeed_slope.0,
            b.vx_at_boundary.0.max(b.vx_at_boundary.1)
        );
    }
    Ok(())
}
