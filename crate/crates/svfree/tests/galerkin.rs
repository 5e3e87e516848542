use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};
use svfree::galerkin::*;
use svfree::picard::solve_nonlinear;
use svfree::profile::*;
use svfree::trajectory::FlowHistory;
use svfree::Problem;

fn parabolic(n: usize) -> HeightProfile {
    sample_height_profile(ProfileKind::Parabolic, &[1.0], &build_grid(n).unwrap()).unwrap()
}

fn times(n_steps: usize, dt: f64) -> Vec<f64> {
    (0..=n_steps).map(|k| k as f64 * dt).collect()
}

#[test]
fn single_mode_basis_is_constant() {
    let b = neumann_basis(1).unwrap();
    assert_eq!(b.n_modes(), 1);
    for x in [0.0, 0.3, 1.0] {
        assert_eq!(b.value(0, x), 1.0);
        assert_eq!(b.derivative(0, x), 0.0);
    }
    assert!(neumann_basis(0).is_err());
}

#[test]
fn basis_is_orthonormal_with_neumann_ends() {
    let grid = build_grid(401).unwrap();
    let b = neumann_basis(32).unwrap();
    assert!(b.orthonormality_defect(&grid) <= 1e-10);
    for n in 0..32 {
        assert!(b.derivative(n, 0.0).abs() < 1e-12 * (1.0 + n as f64));
        assert!(b.derivative(n, 1.0).abs() < 1e-12 * (1.0 + n as f64));
    }
    assert_abs_diff_eq!(b.value(1, 0.25), SQRT_2 * (PI / 4.0).cos(), epsilon = 1e-15);
}

#[test]
fn mass_matrix_entries() {
    let p = parabolic(401);
    let m = assemble_mass(&p, &neumann_basis(8).unwrap()).unwrap();
    assert_abs_diff_eq!(m[(0, 0)], 1.0 / 6.0, epsilon = 1e-12);
    assert!(m[(0, 1)].abs() < 1e-14);
    assert_eq!(m, m.transpose());
    assert!(m.clone().cholesky().is_some());
}

#[test]
fn stiffness_entries_and_scaling() {
    let p = parabolic(401);
    let b = neumann_basis(8).unwrap();
    let s1 = assemble_stiffness(&p, &b, &vec![1.0; 401]).unwrap();
    let s2 = assemble_stiffness(&p, &b, &vec![2.0; 401]).unwrap();
    assert_abs_diff_eq!(s1[(1, 1)], PI * PI / 6.0 + 0.5, epsilon = 1e-8);
    assert_eq!(s1, s1.transpose());
    for j in 0..8 {
        assert_eq!(s1[(0, j)], 0.0);
        assert_eq!(s1[(j, 0)], 0.0);
    }
    assert!(s1.symmetric_eigenvalues().iter().all(|&l| l > -1e-12));
    assert!((&s1 / 4.0 - &s2).amax() < 1e-14);
}

#[test]
fn stiffness_rejects_degenerate_flow() {
    let p = parabolic(101);
    let b = neumann_basis(4).unwrap();
    let mut e = vec![1.0; 101];
    e[50] = 20.0;
    assert!(matches!(assemble_stiffness(&p, &b, &e), Err(svfree::Error::FlowMapDegeneracy { .. })));
    e[50] = 0.05;
    assert!(assemble_forcing(&p, &b, &e).is_err());
}

#[test]
fn forcing_entries_and_scaling() {
    let b = neumann_basis(8).unwrap();
    let f = |n: usize, e: f64| assemble_forcing(&parabolic(n), &b, &vec![e; n]).unwrap();
    let (f1, f2) = (f(401, 1.0), f(401, 2.0));
    assert_eq!(f1[0], 0.0);
    assert!((&f1 / 4.0 - &f2).amax() < 1e-14);
    // -sqrt2 pi int (x(1-x))^2 sin(pi x) = sqrt2 (4 pi^2 - 48) / pi^4
    let exact = SQRT_2 * (4.0 * PI * PI - 48.0) / PI.powi(4);
    assert_abs_diff_eq!(f1[1], exact, epsilon = 1e-9);
    assert_abs_diff_eq!(f(201, 1.0)[1], f1[1], epsilon = 1e-8);
}

#[test]
fn projection_examples() {
    let grid = build_grid(401).unwrap();
    let b = neumann_basis(6).unwrap();
    let zero = project_initial(&GridFunction::analytic(CosineSeries::zero()), &b, &grid);
    assert!(zero.iter().all(|&c| c == 0.0));
    let one = project_initial(&GridFunction::analytic(CosineSeries::single(1.0, 1.0)), &b, &grid);
    assert_abs_diff_eq!(one[1], FRAC_1_SQRT_2, epsilon = 1e-12);
    for j in [0, 2, 3, 4, 5] {
        assert!(one[j].abs() < 1e-12, "{j}: {}", one[j]);
    }
    let sum = CosineSeries {
        constant: 1.0,
        terms: vec![(1.0, SQRT_2)],
    };
    let c = project_initial(&GridFunction::analytic(sum), &b, &grid);
    let expected = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
    for (a, e) in c.iter().zip(expected) {
        assert_abs_diff_eq!(*a, e, epsilon = 1e-12);
    }
}

#[test]
fn step_examples() {
    let lambda = DVector::from_vec(vec![0.7, -0.2]);
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.1, 0.1, 1.0]);
    let zero_s = DMatrix::zeros(2, 2);
    let zero_f = DVector::zeros(2);
    assert!((step_linearized(&lambda, 0.01, &m, &zero_s, &zero_f, 0.01).unwrap() - &lambda).amax() < 1e-15);

    let one = DVector::from_vec(vec![3.0]);
    let next = step_linearized(&one, 0.1, &DMatrix::from_element(1, 1, 2.0), &DMatrix::from_element(1, 1, 5.0), &DVector::zeros(1), 0.1)
        .unwrap();
    assert_abs_diff_eq!(next[0], 3.0 / (1.0 + 0.1 * 5.0 / 2.0), epsilon = 1e-15);

    let f = DVector::from_vec(vec![1.0, -1.0]);
    let next = step_linearized(&lambda, 0.01, &m, &zero_s, &f, 0.01).unwrap();
    let expected = &lambda + m.clone().lu().solve(&f).unwrap() * 0.01;
    assert!((next - expected).amax() < 1e-14);
    assert!(step_linearized(&lambda, 0.0, &m, &zero_s, &zero_f, 0.0).is_err());
}

#[test]
fn unforced_rest_stays_at_rest() {
    let p = parabolic(101);
    let solver = GalerkinSolver::new(&p, 8).unwrap().with_pressure(0.0);
    let ts = times(20, 1e-3);
    let flow = FlowHistory::identity(p.grid(), ts.clone());
    let (traj, balance) = solver.solve(&DVector::zeros(8), &ts, 1e-3, &flow).unwrap();
    assert!(traj.coefficients.iter().flatten().all(|&c| c == 0.0));
    assert_eq!(balance.residual, 0.0);
}

#[test]
fn energy_balance_is_first_order() {
    let p = Problem::canonical().with_t_final(0.01);
    let flow = solve_nonlinear(&p).unwrap().flow;
    let u0 = GridFunction::Analytic(p.u0.clone());
    let r = |dt| solve_linearized_balance(&p.profile, &u0, &flow, p.t_final, dt, p.n_modes).unwrap().residual.abs();
    let (r1, r2) = (r(1e-4), r(5e-5));
    assert!(r1 <= 5.0 * 1e-4 * p.t_final.max(1.0), "{r1}");
    let ratio = r1 / r2;
    assert!((1.7..2.3).contains(&ratio), "{ratio}");
}

#[test]
fn modal_solution_is_bounded() {
    let p = parabolic(201);
    let u0 = CosineSeries::single(1.0, 0.4);
    let solver = GalerkinSolver::new(&p, 16).unwrap();
    let (dt, n) = (1e-3, 50);
    let ts = times(n, dt);
    let flow = FlowHistory::identity(p.grid(), ts.clone());
    let lambda0 = solver.project(&GridFunction::analytic(u0.clone()));
    let (traj, _) = solver.solve(&lambda0, &ts, dt, &flow).unwrap();
    let mut sup = 0.0_f64;
    let mut dissipation = 0.0;
    for c in &traj.coefficients[1..] {
        let c = DVector::from_column_slice(c);
        sup = sup.max(solver.weighted_square(&c));
        dissipation += dt * solver.weighted_gradient_square(&c);
    }
    let initial = p.weighted_square(&p.grid().sample(|x| u0.value(x)), 1);
    assert!(sup + dissipation <= 10.0 * initial + 10.0 * n as f64 * dt);
}

#[test]
fn more_modes_converge() {
    let p = parabolic(401);
    let u0 = GridFunction::analytic(CosineSeries {
        constant: 0.0,
        terms: vec![(1.0, 0.3), (2.0, -0.1)],
    });
    let (dt, n) = (1e-3, 20);
    let ts = times(n, dt);
    let flow = FlowHistory::identity(p.grid(), ts.clone());
    let norm = |modes| {
        let s = GalerkinSolver::new(&p, modes).unwrap();
        let traj = solve_linearized(&p, &u0, &flow, n as f64 * dt, dt, modes).unwrap();
        s.weighted_square(&DVector::from_column_slice(traj.coefficients.last().unwrap())).sqrt()
    };
    let values: Vec<f64> = [4, 8, 16, 32].into_iter().map(norm).collect();
    let steps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(steps.windows(2).all(|s| s[1] < s[0]), "{values:?}");
}

#[test]
fn crank_nicolson_runs() {
    let p = parabolic(101);
    let solver = GalerkinSolver::new(&p, 8).unwrap().with_scheme(TimeScheme::CrankNicolson);
    let ts = times(10, 1e-3);
    let flow = FlowHistory::identity(p.grid(), ts.clone());
    let (traj, _) = solver.solve(&DVector::zeros(8), &ts, 1e-3, &flow).unwrap();
    assert!(traj.coefficients.iter().flatten().all(|c| c.is_finite()));
}

#[test]
fn step_count_requires_integer_multiple() {
    assert_eq!(step_count(0.05, 1e-4).unwrap(), 500);
    assert!(step_count(0.05, 3e-4).is_err());
    assert!(step_count(0.05, 0.0).is_err());
}
