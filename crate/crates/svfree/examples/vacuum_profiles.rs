//! Grids, vacuum profiles, weighted quadrature and derivatives.
//!
//! ```text
//! cargo run --example vacuum_profiles
//! ```

use svfree::profile::{build_grid, differentiate, sample_height_profile, Field, ModalField, ProfileKind};

fn main() -> svfree::Result<()> {
    let grid = build_grid(401)?;
    println!("grid: {} nodes, h = {}", grid.n_nodes(), grid.spacing());

    for (kind, params) in [
        (ProfileKind::Parabolic, vec![1.0]),
        (ProfileKind::Sine, vec![0.5]),
        (ProfileKind::Distance, vec![]),
    ] {
        let p = sample_height_profile(kind, &params, &grid)?;
        println!(
            "{kind:?}: peak {:.4}, mass {:.6}, c1 d <= rho0 <= c2 d with c1 = {:.4}, c2 = {:.4}",
            p.values()[grid.mid_index()],
            p.mass(),
            p.c1(),
            p.c2()
        );
    }

    // x^2 (1 - x)^2 touches down flat, so it is not a physical vacuum
    match sample_height_profile(ProfileKind::Custom, &[0.0, 0.0, 1.0, -2.0, 1.0], &grid) {
        Ok(_) => println!("flat profile accepted?"),
        Err(e) => println!("flat profile rejected: {e}"),
    }

    let rho0 = sample_height_profile(ProfileKind::Parabolic, &[1.0], &grid)?;
    let ones = vec![1.0; grid.n_nodes()];
    for k in 0..=3 {
        println!("int rho0^{k} = {:.12}", rho0.quadrature(&ones, k));
    }

    // second order finite differences
    for n in [51, 101, 201] {
        let g = build_grid(n)?;
        let f = Field::from_fn("sin 3x", &g, |x| (3.0 * x).sin());
        let d = differentiate(&f, &g, 1)?;
        let err = g
            .nodes()
            .iter()
            .zip(&d.values)
            .map(|(x, v)| (v - 3.0 * (3.0 * x).cos()).abs())
            .fold(0.0, f64::max);
        println!("n = {n:>3}: max |f' - 3 cos 3x| = {err:.3e}");
    }

    // spectral derivative of a cosine mode is exact
    let mode = ModalField::cosine(vec![0.0, std::f64::consts::FRAC_1_SQRT_2]);
    let d2 = mode.derivative(2);
    println!("d^2/dx^2 cos(pi x) at x = 0: {:.12} (-pi^2 = {:.12})", d2.value_at(0.0), -std::f64::consts::PI.powi(2));
    Ok(())
}
