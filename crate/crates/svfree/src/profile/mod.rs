//! Reference grid, vacuum height profiles, fields and weighted quadrature.

mod analytic;
mod field;
mod grid;

use std::sync::Arc;

pub use analytic::{Analytic, ClosureFn, CosineSeries, Distance, Polynomial, SineBump};
pub use field::{cosine_coefficients, differentiate, Field, GridFunction, ModalField, Parity};
pub use grid::{build_grid, Grid};

use crate::error::{Error, Result};

/// Highest derivative order tabulated at the nodes.
pub const TABULATED_DERIVATIVES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `a x (1 - x)`
    Parabolic,
    /// `a sin(pi x)`
    Sine,
    /// `min(x, 1 - x)`, the weight used by the interpolation identities.
    Distance,
    /// Any closed form supplied by the caller.
    Custom,
}

/// Initial height `rho0` with exact derivatives and vacuum-rate constants
/// `c1 d(x) <= rho0(x) <= c2 d(x)`.
#[derive(Debug, Clone)]
pub struct HeightProfile {
    kind: ProfileKind,
    func: Arc<dyn Analytic>,
    grid: Grid,
    values: Vec<f64>,
    derivatives: Vec<Vec<f64>>,
    c1: f64,
    c2: f64,
}

/// Samples and validates a profile of the given kind.
///
/// `params` is `[a]` for parabolic and sine profiles, empty for the distance
/// profile, and the monomial coefficients for `Custom` (a polynomial).
pub fn sample_height_profile(kind: ProfileKind, params: &[f64], grid: &Grid) -> Result<HeightProfile> {
    let amplitude = || -> Result<f64> {
        match params {
            [] => Ok(1.0),
            [a] if *a > 0.0 && a.is_finite() => Ok(*a),
            _ => Err(Error::config(
                "profile.params",
                format!("{kind:?} profile takes one positive amplitude, got {params:?}"),
            )),
        }
    };
    match kind {
        ProfileKind::Parabolic => {
            let a = amplitude()?;
            HeightProfile::with_constants(kind, Arc::new(Polynomial::new(vec![0.0, a, -a])), grid, a / 2.0, a)
        }
        ProfileKind::Sine => {
            let a = amplitude()?;
            HeightProfile::with_constants(
                kind,
                Arc::new(SineBump { amplitude: a }),
                grid,
                2.0 * a,
                std::f64::consts::PI * a,
            )
        }
        ProfileKind::Distance => {
            if !params.is_empty() {
                return Err(Error::config("profile.params", "distance profile takes no parameters"));
            }
            HeightProfile::with_constants(kind, Arc::new(Distance), grid, 1.0, 1.0)
        }
        ProfileKind::Custom => {
            if params.is_empty() {
                return Err(Error::config("profile.params", "custom profile needs polynomial coefficients"));
            }
            HeightProfile::custom(Arc::new(Polynomial::new(params.to_vec())), grid)
        }
    }
}

impl HeightProfile {
    /// A custom closed-form profile. The vacuum constants are estimated from
    /// the nodal ratio `rho0 / d` together with the endpoint slopes.
    pub fn custom(func: Arc<dyn Analytic>, grid: &Grid) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        let n = grid.n_nodes();
        for &x in &grid.nodes()[1..n - 1] {
            let r = func.value(x) / x.min(1.0 - x);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        for x in [0.0, 1.0] {
            let s = func.derivative(x, 1).abs();
            lo = lo.min(s);
            hi = hi.max(s);
        }
        Self::with_constants(ProfileKind::Custom, func, grid, lo, hi)
    }

    fn with_constants(kind: ProfileKind, func: Arc<dyn Analytic>, grid: &Grid, c1: f64, c2: f64) -> Result<Self> {
        let n = grid.n_nodes();
        let mut values = grid.sample(|x| func.value(x));
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        for (i, x) in [(0, 0.0), (n - 1, 1.0)] {
            let v = values[i];
            if v.abs() > 1e-13 * scale {
                return Err(Error::Validation(format!(
                    "physical vacuum: rho0({x}) = {v:e} must vanish at the boundary"
                )));
            }
            values[i] = 0.0;
        }
        if let Some(i) = (1..n - 1).find(|&i| values[i] <= 0.0 || !values[i].is_finite()) {
            return Err(Error::Validation(format!(
                "rho0 must be positive inside the interval, rho0({}) = {}",
                grid.nodes()[i],
                values[i]
            )));
        }
        for x in [0.0, 1.0] {
            let s = func.derivative(x, 1);
            if !(s.abs() > 1e-12 && s.is_finite()) {
                return Err(Error::Validation(format!(
                    "physical vacuum: endpoint slope rho0'({x}) = {s:e} must be nonzero and finite"
                )));
            }
        }
        if !(c1 > 0.0 && c2.is_finite() && c1 <= c2) {
            return Err(Error::Validation(format!("vacuum-rate constants c1 = {c1}, c2 = {c2} are not admissible")));
        }
        for (&x, &v) in grid.nodes().iter().zip(&values) {
            let d = x.min(1.0 - x);
            let slack = 1e-12 * d;
            if v < c1 * d - slack || v > c2 * d + slack {
                return Err(Error::Validation(format!(
                    "two-sided vacuum bound fails at x = {x}: rho0 = {v}, c1 d = {}, c2 d = {}",
                    c1 * d,
                    c2 * d
                )));
            }
        }
        let derivatives = (1..=TABULATED_DERIVATIVES)
            .map(|l| grid.sample(|x| func.derivative(x, l)))
            .collect();
        Ok(Self {
            kind,
            func,
            grid: grid.clone(),
            values,
            derivatives,
            c1,
            c2,
        })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Nodal values, exactly zero at both endpoints.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Nodal values of the `l`-th derivative, `1 <= l <= 5`.
    pub fn derivative(&self, l: usize) -> &[f64] {
        &self.derivatives[l - 1]
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn function(&self) -> &Arc<dyn Analytic> {
        &self.func
    }

    pub fn value_at(&self, x: f64) -> f64 {
        if x == 0.0 || x == 1.0 {
            0.0
        } else {
            self.func.value(x)
        }
    }

    pub fn derivative_at(&self, x: f64, order: usize) -> f64 {
        if order == 0 {
            self.value_at(x)
        } else {
            self.func.derivative(x, order)
        }
    }

    /// Nodal values of `rho0^k`.
    pub fn weight(&self, k: u32) -> Vec<f64> {
        self.values.iter().map(|v| v.powi(k as i32)).collect()
    }

    /// Total mass `int rho0`.
    pub fn mass(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    /// Simpson approximation of `int rho0^k f`.
    pub fn quadrature(&self, field: &[f64], weight_power: u32) -> f64 {
        self.quadrature_range(field, weight_power, 0, self.grid.n_nodes() - 1)
    }

    /// As [`Self::quadrature`] over the node range `lo..=hi`.
    pub fn quadrature_range(&self, field: &[f64], weight_power: u32, lo: usize, hi: usize) -> f64 {
        assert_eq!(field.len(), self.grid.n_nodes(), "field length must match the grid");
        let integrand: Vec<f64> = if weight_power == 0 {
            field.to_vec()
        } else {
            field
                .iter()
                .zip(&self.values)
                .map(|(f, r)| f * r.powi(weight_power as i32))
                .collect()
        };
        self.grid.integrate_range(&integrand, lo, hi)
    }

    /// `int rho0^k f^2`, or `+inf` if `f` is not finite somewhere.
    ///
    /// A non-finite nodal value marks a non-integrable endpoint singularity.
    pub fn weighted_square(&self, field: &[f64], weight_power: u32) -> f64 {
        if field.iter().any(|v| !v.is_finite()) {
            return f64::INFINITY;
        }
        let sq: Vec<f64> = field.iter().map(|v| v * v).collect();
        self.quadrature(&sq, weight_power)
    }
}
