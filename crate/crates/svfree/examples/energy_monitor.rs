//! Energy functionals along the canonical solution, with both ways of
//! computing the time derivatives.

use svfree::jet::{EnergyMonitor, JetMethod};
use svfree::picard::solve_nonlinear;
use svfree::Problem;

fn main() -> svfree::Result<()> {
    let p = Problem::canonical();
    let traj = solve_nonlinear(&p)?;
    for method in [JetMethod::Pointwise, JetMethod::Galerkin] {
        let monitor = EnergyMonitor::new(&p.profile, p.u0.as_ref(), &traj, method)?;
        println!("{method:?}: M0 = {:.4e}", monitor.m0);
        println!("  {:>8} {:>12} {:>12} {:>8}", "t", "E", "lowE", "E<=2M0");
        for r in monitor.reports(&traj, 100)? {
            println!("  {:>8.4} {:>12.4e} {:>12.4e} {:>8}", r.t, r.e_total, r.low_e_total, r.within_apriori);
        }
    }
    Ok(())
}
