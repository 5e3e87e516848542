//! Weighted norms, weighted Sobolev-type inequalities and the half-interval
//! integration-by-parts identities behind the weighted interpolation inequality.
//!
//! Inequality checks never assert a constant; they report the empirical one.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{GridFunction, HeightProfile, ProfileKind};

/// Both sides of an inequality `lhs <= C rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs` when `rhs > 0`.
    pub empirical_constant: Option<f64>,
    /// Smallest constant that makes the inequality hold on this instance.
    pub satisfied_with: f64,
}

impl RatioReport {
    pub fn new(lhs: f64, rhs: f64) -> Result<Self> {
        if rhs == 0.0 && lhs > 0.0 {
            return Err(Error::InequalityViolation { lhs });
        }
        let empirical_constant = (rhs > 0.0).then(|| lhs / rhs);
        Ok(Self {
            lhs,
            rhs,
            empirical_constant,
            satisfied_with: empirical_constant.unwrap_or(0.0),
        })
    }

    /// Whether the inequality holds with constant `c`.
    pub fn holds_with(&self, c: f64) -> bool {
        self.lhs <= c * self.rhs
    }
}

/// Both sides of an exact identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_gap: f64,
}

impl IdentityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            abs_gap: (lhs - rhs).abs(),
        }
    }
}

/// The four half-interval identities for `rho0 = d(x)`:
///
/// ```text
/// int_0^{1/2} g^2      = g(1/2)^2 / 2 - 2 int_0^{1/2} rho0 g g_x
/// int_0^{1/2} rho0 g^2 = g(1/2)^2 / 8 -   int_0^{1/2} rho0^2 g g_x
/// ```
///
/// and their mirror images on `[1/2, 1]` (with the sign of the integral flipped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationIdentities {
    pub unweighted_left: IdentityReport,
    pub weighted_left: IdentityReport,
    pub unweighted_right: IdentityReport,
    pub weighted_right: IdentityReport,
}

impl InterpolationIdentities {
    pub fn max_gap(&self) -> f64 {
        [
            self.unweighted_left,
            self.weighted_left,
            self.unweighted_right,
            self.weighted_right,
        ]
        .iter()
        .map(|r| r.abs_gap)
        .fold(0.0, f64::max)
    }
}

/// `sqrt(int rho0^k g^2)`.
pub fn weighted_l2_norm(field: &GridFunction, k: u32, profile: &HeightProfile) -> f64 {
    let g = field.values(profile.grid());
    profile.weighted_square(&g, k).sqrt()
}

/// `sqrt(int rho0^k (g^2 + g_x^2))`.
pub fn weighted_h1_norm(field: &GridFunction, k: u32, profile: &HeightProfile) -> Result<f64> {
    Ok(weighted_h1_square(field, k, profile)?.sqrt())
}

fn weighted_h1_square(field: &GridFunction, k: u32, profile: &HeightProfile) -> Result<f64> {
    let grid = profile.grid();
    let g = field.values(grid);
    let gx = field.derivative_values(grid, 1)?;
    Ok(profile.weighted_square(&g, k) + profile.weighted_square(&gx, k))
}

/// Spectral `H^s` norm from orthonormal cosine coefficients:
/// `sqrt(sum (1 + (n pi)^2)^s c_n^2)`.
pub fn hs_norm_from_coefficients(coeffs: &[f64], s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| (1.0 + (n as f64 * PI).powi(2)).powf(s) * c * c)
        .sum::<f64>()
        .sqrt()
}

/// Spectral `H^{1/2}` norm. Nodal fields are projected onto cosine modes first.
pub fn h_half_norm(field: &GridFunction, profile: &HeightProfile) -> f64 {
    hs_norm_from_coefficients(&field.cosine_coefficients(profile.grid()), 0.5)
}

/// `int rho0^k w^2  <=  C int rho0^{k+2} (w^2 + w_x^2)`.
pub fn check_weighted_sobolev(field: &GridFunction, k: u32, profile: &HeightProfile) -> Result<RatioReport> {
    let w = field.values(profile.grid());
    let lhs = profile.weighted_square(&w, k);
    let rhs = weighted_h1_square(field, k + 2, profile)?;
    RatioReport::new(lhs, rhs)
}

/// `|w|_{H^{1/2}}^2  <=  C int rho0 (w^2 + w_x^2)`.
pub fn check_h_half_weighted(field: &GridFunction, profile: &HeightProfile) -> Result<RatioReport> {
    let lhs = h_half_norm(field, profile).powi(2);
    let rhs = weighted_h1_square(field, 1, profile)?;
    RatioReport::new(lhs, rhs)
}

/// `|g|_{L^2}  <=  C |g|_{L^2_rho0}^{1/2} |g|_{H^1_rho0}^{1/2}`.
pub fn check_interpolation_inequality(field: &GridFunction, profile: &HeightProfile) -> Result<RatioReport> {
    let lhs = weighted_l2_norm(field, 0, profile);
    let l2 = weighted_l2_norm(field, 1, profile);
    let h1 = weighted_h1_norm(field, 1, profile)?;
    RatioReport::new(lhs, (l2 * h1).sqrt())
}

/// `|w|_{L^4}  <=  C |w|_{H^{1/4}}`.
pub fn check_sobolev_embedding(field: &GridFunction, profile: &HeightProfile) -> Result<RatioReport> {
    let grid = profile.grid();
    let w = field.values(grid);
    let fourth: Vec<f64> = w.iter().map(|v| v.powi(4)).collect();
    let lhs = grid.integrate(&fourth).powf(0.25);
    let rhs = hs_norm_from_coefficients(&field.cosine_coefficients(grid), 0.25);
    RatioReport::new(lhs, rhs)
}

/// Evaluates both sides of the half-interval identities.
///
/// Requires the distance profile `rho0 = min(x, 1 - x)`.
pub fn check_interpolation_identity(field: &GridFunction, profile: &HeightProfile) -> Result<InterpolationIdentities> {
    if profile.kind() != ProfileKind::Distance {
        return Err(Error::Precondition(format!(
            "interpolation identities need the distance profile, got {:?}",
            profile.kind()
        )));
    }
    let grid = profile.grid();
    let n = grid.n_nodes();
    let mid = grid.mid_index();
    let g = field.values(grid);
    let gx = field.derivative_values(grid, 1)?;
    let g_half = field.value_at(grid, 0.5);
    let sq: Vec<f64> = g.iter().map(|v| v * v).collect();
    let ggx: Vec<f64> = g.iter().zip(&gx).map(|(a, b)| a * b).collect();

    let side = |lo: usize, hi: usize, sign: f64| {
        let unweighted = IdentityReport::new(
            profile.quadrature_range(&sq, 0, lo, hi),
            0.5 * g_half * g_half - sign * 2.0 * profile.quadrature_range(&ggx, 1, lo, hi),
        );
        let weighted = IdentityReport::new(
            profile.quadrature_range(&sq, 1, lo, hi),
            0.125 * g_half * g_half - sign * profile.quadrature_range(&ggx, 2, lo, hi),
        );
        (unweighted, weighted)
    };
    let (unweighted_left, weighted_left) = side(0, mid, 1.0);
    let (unweighted_right, weighted_right) = side(mid, n - 1, -1.0);
    Ok(InterpolationIdentities {
        unweighted_left,
        weighted_left,
        unweighted_right,
        weighted_right,
    })
}
