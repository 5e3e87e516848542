use std::f64::consts::{PI, SQRT_2};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use svfree::profile::*;
use svfree::weighted::*;
use svfree::Error;

fn profile(kind: ProfileKind, n: usize) -> HeightProfile {
    let params: &[f64] = if kind == ProfileKind::Distance { &[] } else { &[1.0] };
    sample_height_profile(kind, params, &build_grid(n).unwrap()).unwrap()
}

fn poly(c: &[f64]) -> GridFunction {
    GridFunction::analytic(Polynomial::new(c.to_vec()))
}

fn cosine(mode: f64, amp: f64) -> GridFunction {
    GridFunction::analytic(CosineSeries::single(mode, amp))
}

#[test]
fn l2_norm_examples() {
    let p = profile(ProfileKind::Parabolic, 401);
    assert_eq!(weighted_l2_norm(&poly(&[0.0]), 1, &p), 0.0);
    assert_abs_diff_eq!(weighted_l2_norm(&poly(&[1.0]), 1, &p), (1.0f64 / 6.0).sqrt(), epsilon = 1e-13);
    assert_abs_diff_eq!(weighted_l2_norm(&poly(&[1.0]), 0, &p), 1.0, epsilon = 1e-13);
}

#[test]
fn h1_norm_examples() {
    let p = profile(ProfileKind::Parabolic, 401);
    assert_eq!(weighted_h1_norm(&poly(&[0.0]), 1, &p).unwrap(), 0.0);
    assert_abs_diff_eq!(weighted_h1_norm(&poly(&[1.0]), 1, &p).unwrap(), (1.0f64 / 6.0).sqrt(), epsilon = 1e-13);
    let expected = (1.0f64 / 6.0 + 1.0 / 20.0).sqrt();
    assert_abs_diff_eq!(weighted_h1_norm(&poly(&[0.0, 1.0]), 1, &p).unwrap(), expected, epsilon = 1e-10);
}

#[test]
fn h_half_norm_examples() {
    let p = profile(ProfileKind::Parabolic, 401);
    assert_abs_diff_eq!(h_half_norm(&poly(&[0.0]), &p), 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(h_half_norm(&poly(&[1.0]), &p), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(h_half_norm(&cosine(1.0, SQRT_2), &p), (1.0 + PI * PI).powf(0.25), epsilon = 1e-10);
}

#[test]
fn weighted_sobolev_examples() {
    let d = profile(ProfileKind::Distance, 401);
    let zero = check_weighted_sobolev(&poly(&[0.0]), 0, &d).unwrap();
    assert_eq!((zero.lhs, zero.rhs, zero.empirical_constant), (0.0, 0.0, None));
    assert!(zero.holds_with(0.0));

    let one = check_weighted_sobolev(&poly(&[1.0]), 0, &d).unwrap();
    assert_abs_diff_eq!(one.lhs, 1.0, epsilon = 1e-13);
    assert_abs_diff_eq!(one.rhs, 1.0 / 12.0, epsilon = 1e-13);
    assert_abs_diff_eq!(one.empirical_constant.unwrap(), 12.0, epsilon = 1e-10);

    let bump = check_weighted_sobolev(&poly(&[0.0, 1.0, -1.0]), 0, &d).unwrap();
    let c = bump.empirical_constant.unwrap();
    assert!(c.is_finite() && c < 50.0, "{c}");
    assert!(bump.holds_with(c * (1.0 + 1e-12)));
}

#[test]
fn h_half_weighted_examples() {
    let d = profile(ProfileKind::Distance, 401);
    let zero = check_h_half_weighted(&poly(&[0.0]), &d).unwrap();
    assert_abs_diff_eq!(zero.lhs, 0.0, epsilon = 1e-20);
    assert_eq!(zero.rhs, 0.0);
    let one = check_h_half_weighted(&poly(&[1.0]), &d).unwrap();
    assert_abs_diff_eq!(one.lhs, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(one.rhs, 0.25, epsilon = 1e-13);
    assert_abs_diff_eq!(one.empirical_constant.unwrap(), 4.0, epsilon = 1e-10);

    let c = |n| {
        check_h_half_weighted(&cosine(1.0, SQRT_2), &profile(ProfileKind::Distance, n))
            .unwrap()
            .empirical_constant
            .unwrap()
    };
    let (a, b) = (c(201), c(401));
    assert!(((a - b) / b).abs() < 0.01, "{a} vs {b}");
}

#[test]
fn interpolation_identity_examples() {
    let d = profile(ProfileKind::Distance, 401);
    let one = check_interpolation_identity(&poly(&[1.0]), &d).unwrap();
    assert_abs_diff_eq!(one.unweighted_left.lhs, 0.5, epsilon = 1e-14);
    assert_abs_diff_eq!(one.unweighted_left.rhs, 0.5, epsilon = 1e-14);
    assert!(one.max_gap() < 1e-14);

    let x = check_interpolation_identity(&poly(&[0.0, 1.0]), &d).unwrap();
    assert_abs_diff_eq!(x.unweighted_left.lhs, 1.0 / 24.0, epsilon = 1e-14);
    assert_abs_diff_eq!(x.unweighted_left.rhs, 1.0 / 24.0, epsilon = 1e-14);
    assert!(x.max_gap() < 1e-13);

    let c = check_interpolation_identity(&cosine(1.0, 1.0), &d).unwrap();
    assert!(c.max_gap() <= 1e-8, "{}", c.max_gap());
}

#[test]
fn interpolation_identity_needs_distance_profile() {
    let p = profile(ProfileKind::Parabolic, 101);
    assert!(matches!(check_interpolation_identity(&poly(&[1.0]), &p), Err(Error::Precondition(_))));
}

#[test]
fn interpolation_identity_gap_shrinks_fourth_order() {
    let gap = |n| {
        check_interpolation_identity(&cosine(3.0, 1.0), &profile(ProfileKind::Distance, n))
            .unwrap()
            .max_gap()
    };
    let (coarse, fine) = (gap(101), gap(201));
    assert!(coarse / fine > 12.0, "{coarse} -> {fine}");
}

#[test]
fn interpolation_inequality_examples() {
    let d = profile(ProfileKind::Distance, 401);
    let zero = check_interpolation_inequality(&poly(&[0.0]), &d).unwrap();
    assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
    let one = check_interpolation_inequality(&poly(&[1.0]), &d).unwrap();
    assert_abs_diff_eq!(one.lhs, 1.0, epsilon = 1e-13);
    // sqrt(|1|_{L2_d} |1|_{H1_d}) = sqrt(1/2 * 1/2)
    assert_abs_diff_eq!(one.rhs, 0.5, epsilon = 1e-13);
    assert_abs_diff_eq!(one.empirical_constant.unwrap(), 2.0, epsilon = 1e-12);

    let c = |n| {
        check_interpolation_inequality(&cosine(3.0, SQRT_2), &profile(ProfileKind::Distance, n))
            .unwrap()
            .empirical_constant
            .unwrap()
    };
    let (a, b) = (c(201), c(401));
    assert!(((a - b) / b).abs() < 0.01, "{a} vs {b}");
}

#[test]
fn zero_rhs_with_positive_lhs_is_a_violation() {
    assert!(matches!(RatioReport::new(1.0, 0.0), Err(Error::InequalityViolation { .. })));
    assert!(RatioReport::new(0.0, 0.0).unwrap().empirical_constant.is_none());
}

fn family() -> Vec<GridFunction> {
    let mut f = vec![poly(&[1.0]), poly(&[0.0, 1.0]), poly(&[0.0, 0.0, 1.0])];
    f.extend((1..=8).map(|n| cosine(n as f64, 1.0)));
    f
}

#[test]
fn empirical_constants_stable_under_refinement() {
    for kind in [ProfileKind::Parabolic, ProfileKind::Distance] {
        let (coarse, fine) = (profile(kind, 201), profile(kind, 401));
        for (i, g) in family().iter().enumerate() {
            let checks: [&dyn Fn(&HeightProfile) -> RatioReport; 4] = [
                &|p| check_weighted_sobolev(g, 0, p).unwrap(),
                &|p| check_h_half_weighted(g, p).unwrap(),
                &|p| check_interpolation_inequality(g, p).unwrap(),
                &|p| check_sobolev_embedding(g, p).unwrap(),
            ];
            for (j, check) in checks.iter().enumerate() {
                let a = check(&coarse).empirical_constant.unwrap();
                let b = check(&fine).empirical_constant.unwrap();
                assert!(((a - b) / b).abs() < 0.01, "{kind:?} member {i} check {j}: {a} vs {b}");
            }
        }
    }
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 6)
}

fn series(c: &[f64]) -> GridFunction {
    GridFunction::analytic(CosineSeries {
        constant: c[0],
        terms: c[1..].iter().enumerate().map(|(k, &a)| ((k + 1) as f64, a)).collect(),
    })
}

fn norms(g: &GridFunction, p: &HeightProfile) -> [f64; 4] {
    [
        weighted_l2_norm(g, 1, p),
        weighted_l2_norm(g, 2, p),
        weighted_h1_norm(g, 1, p).unwrap(),
        h_half_norm(g, p),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norms_are_homogeneous(c in coeffs(), alpha in -5.0..5.0f64) {
        let p = profile(ProfileKind::Parabolic, 101);
        let g = series(&c);
        let base = norms(&g, &p);
        let scaled = norms(&g.scaled(alpha), &p);
        for (b, s) in base.iter().zip(scaled) {
            prop_assert!((s - alpha.abs() * b).abs() <= 1e-12 * (alpha.abs() * b).max(1e-300));
        }
    }

    #[test]
    fn norms_satisfy_triangle_inequality(a in coeffs(), b in coeffs()) {
        let p = profile(ProfileKind::Parabolic, 101);
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (na, nb, ns) = (norms(&series(&a), &p), norms(&series(&b), &p), norms(&series(&sum), &p));
        for i in 0..4 {
            prop_assert!(ns[i] <= na[i] + nb[i] + 1e-12);
        }
    }
}
