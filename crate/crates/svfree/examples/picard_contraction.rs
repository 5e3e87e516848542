//! The nonlinear solve by Picard iteration on the flow map.

use svfree::picard::solve_nonlinear;
use svfree::Problem;

fn main() -> svfree::Result<()> {
    for t_final in [0.0125, 0.025, 0.05] {
        let traj = solve_nonlinear(&Problem::canonical().with_t_final(t_final))?;
        let (lo, hi) = traj.eta_x_range();
        println!("T = {t_final}: {} iterations, eta_x in [{lo:.6}, {hi:.6}]", traj.convergence.iterations);
        println!("  {:>4} {:>12} {:>12} {:>10}", "iter", "sup", "grad", "ratio");
        for c in &traj.convergence.history {
            println!(
                "  {:>4} {:>12.3e} {:>12.3e} {:>10}",
                c.iteration,
                c.sup_diff,
                c.grad_diff,
                c.ratio.map_or("-".into(), |r| format!("{r:.3e}"))
            );
        }
    }
    Ok(())
}
