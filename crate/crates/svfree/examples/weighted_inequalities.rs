//! Weighted norms, empirical inequality constants and the half-interval
//! integration-by-parts identities.

use std::f64::consts::SQRT_2;

use svfree::profile::{build_grid, sample_height_profile, CosineSeries, GridFunction, Polynomial, ProfileKind};
use svfree::weighted::*;

fn main() -> svfree::Result<()> {
    let grid = build_grid(401)?;
    let d = sample_height_profile(ProfileKind::Distance, &[], &grid)?;
    let parabolic = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid)?;

    let x = GridFunction::analytic(Polynomial::new(vec![0.0, 1.0]));
    println!("|x|_{{L2_rho0}}  = {:.10}", weighted_l2_norm(&x, 1, &parabolic));
    println!("|x|_{{H1_rho0}}  = {:.10} (exact {:.10})", weighted_h1_norm(&x, 1, &parabolic)?, (1.0f64 / 6.0 + 0.05).sqrt());
    let e1 = GridFunction::analytic(CosineSeries::single(1.0, SQRT_2));
    println!("|e_1|_{{H^1/2}}  = {:.10}", h_half_norm(&e1, &parabolic));

    println!("\nempirical constants against rho0 = d(x):");
    println!("{:<12} {:>10} {:>10} {:>10} {:>10}", "field", "sobolev", "h-half", "interp", "embed");
    let family: Vec<(String, GridFunction)> = vec![
        ("1".into(), GridFunction::analytic(Polynomial::new(vec![1.0]))),
        ("x(1-x)".into(), GridFunction::analytic(Polynomial::new(vec![0.0, 1.0, -1.0]))),
        ("cos 3 pi x".into(), GridFunction::analytic(CosineSeries::single(3.0, 1.0))),
        ("cos 8 pi x".into(), GridFunction::analytic(CosineSeries::single(8.0, 1.0))),
    ];
    for (name, g) in &family {
        let c = |r: RatioReport| r.empirical_constant.unwrap_or(f64::NAN);
        println!(
            "{name:<12} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            c(check_weighted_sobolev(g, 0, &d)?),
            c(check_h_half_weighted(g, &d)?),
            c(check_interpolation_inequality(g, &d)?),
            c(check_sobolev_embedding(g, &d)?)
        );
    }

    println!("\nidentity gaps for cos(pi x):");
    let g = GridFunction::analytic(CosineSeries::single(1.0, 1.0));
    for n in [51, 101, 201, 401] {
        let d = sample_height_profile(ProfileKind::Distance, &[], &build_grid(n)?)?;
        println!("  n = {n:>3}: {:.3e}", check_interpolation_identity(&g, &d)?.max_gap());
    }
    Ok(())
}
