//! Time derivatives of the initial data and the compatibility order at the
//! vacuum ends.

use svfree::jet::{energy_report, initial_jet, HIGH_LABELS};
use svfree::profile::{build_grid, sample_height_profile, CosineSeries, ProfileKind};

fn main() -> svfree::Result<()> {
    let grid = build_grid(401)?;
    let rho0 = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid)?;

    let jet = initial_jet(&rho0, &CosineSeries::zero(), 1.0)?;
    println!("fluid at rest: g1 = -2 (1 - 2x)");
    for i in [0, 100, 200, 300, 400] {
        println!(
            "  x = {:.2}: g1 = {:+.6}, h1 = {:+.6}, g2 = {:+.4e}",
            grid.nodes()[i],
            jet.g[1].values[i],
            jet.h[1].values[i],
            jet.g[2].values[i]
        );
    }
    println!("  compatible to order {}", jet.compatible_orders);

    let r = energy_report(&rho0, &jet.derivatives, f64::INFINITY);
    for (label, v) in HIGH_LABELS.iter().zip(&r.high) {
        println!("  {label:<16} {v:.6e}");
    }

    let wave = initial_jet(&rho0, &CosineSeries::single(1.0, 0.5), 1.0)?;
    println!("\nu0 = 0.5 cos(pi x): compatible to order {}", wave.compatible_orders);
    println!("  g1 at the ends: {:+.6}, {:+.6}", wave.g[1].values[0], wave.g[1].values[400]);
    Ok(())
}
