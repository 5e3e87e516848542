//! Nodal and modal fields and their derivatives.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use super::analytic::Analytic;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::numerics::{cospi, fornberg_weights, sinpi};

/// Nodal values on a grid with a label.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Vec<f64>,
    pub label: String,
}

impl Field {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            values,
            label: label.into(),
        }
    }

    pub fn from_fn(label: impl Into<String>, grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::new(label, grid.sample(f))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Finite-difference derivative of a nodal field.
///
/// Interior nodes use the centered second-order stencil for the requested
/// order; nodes too close to an endpoint use a one-sided window of
/// `order + 2` points, which is also second order.
pub fn differentiate(field: &Field, grid: &Grid, order: usize) -> Result<Field> {
    if order == 0 || order > 6 {
        return Err(Error::Unsupported(format!(
            "finite-difference derivative of order {order} (supported: 1..=6)"
        )));
    }
    let n = grid.n_nodes();
    if field.len() != n {
        return Err(Error::Precondition(format!(
            "field has {} values on a grid of {n} nodes",
            field.len()
        )));
    }
    if n < order + 2 {
        return Err(Error::Precondition(format!(
            "order {order} needs at least {} nodes",
            order + 2
        )));
    }
    let x = grid.nodes();
    let half = (order + 1) / 2;
    let width = order + 2;
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let (lo, hi) = if i >= half && i + half < n {
            (i - half, i + half)
        } else {
            let lo = i.saturating_sub(width / 2).min(n - width);
            (lo, lo + width - 1)
        };
        let w = fornberg_weights(x[i], &x[lo..=hi], order);
        *o = w[order]
            .iter()
            .zip(&field.values[lo..=hi])
            .map(|(a, b)| a * b)
            .sum();
    }
    Ok(Field::new(format!("d{order}({})", field.label), out))
}

/// Which trigonometric family a modal field is expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `1, sqrt2 cos(pi x), sqrt2 cos(2 pi x), ...`
    Cosine,
    /// `0, sqrt2 sin(pi x), sqrt2 sin(2 pi x), ...`
    Sine,
}

/// A truncated trigonometric series in the orthonormal Neumann (cosine) or
/// Dirichlet (sine) basis. Differentiation is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalField {
    pub coeffs: Vec<f64>,
    pub parity: Parity,
}

impl ModalField {
    pub fn cosine(coeffs: Vec<f64>) -> Self {
        Self {
            coeffs,
            parity: Parity::Cosine,
        }
    }

    pub fn sine(coeffs: Vec<f64>) -> Self {
        Self {
            coeffs,
            parity: Parity::Sine,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact derivative of the given order.
    pub fn derivative(&self, order: usize) -> ModalField {
        let mut coeffs = self.coeffs.clone();
        let mut parity = self.parity;
        for _ in 0..order {
            for (n, c) in coeffs.iter_mut().enumerate() {
                let w = n as f64 * PI;
                *c = match parity {
                    Parity::Cosine => -w * *c,
                    Parity::Sine => w * *c,
                };
            }
            parity = match parity {
                Parity::Cosine => Parity::Sine,
                Parity::Sine => Parity::Cosine,
            };
        }
        ModalField { coeffs, parity }
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.derivatives_at(x, 0)[0]
    }

    /// Values of derivatives `0..=max_order` at `x`.
    pub fn derivatives_at(&self, x: f64, max_order: usize) -> Vec<f64> {
        let mut out = vec![0.0; max_order + 1];
        for (n, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            if n == 0 {
                if self.parity == Parity::Cosine {
                    out[0] += a;
                }
                continue;
            }
            let nx = n as f64 * x;
            let (c, s) = (cospi(nx), sinpi(nx));
            let cycle = match self.parity {
                Parity::Cosine => [c, -s, -c, s],
                Parity::Sine => [s, c, -s, -c],
            };
            let w = n as f64 * PI;
            let mut scale = SQRT_2 * a;
            for (k, o) in out.iter_mut().enumerate() {
                *o += scale * cycle[k % 4];
                scale *= w;
            }
        }
        out
    }

    pub fn values_on(&self, grid: &Grid) -> Vec<f64> {
        grid.nodes().iter().map(|&x| self.value_at(x)).collect()
    }
}

/// Orthonormal cosine coefficients of nodal data (discrete cosine transform
/// of type I), so that the data are interpolated exactly at the nodes.
pub fn cosine_coefficients(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let m = n - 1;
    let two_m = 2 * m;
    let mut out = vec![0.0; n];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &f) in values.iter().enumerate() {
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            let phase = ((k * j) % two_m) as f64 / m as f64;
            acc += w * f * cospi(phase);
        }
        let a = 2.0 / m as f64 * acc;
        *o = if k == 0 {
            0.5 * a
        } else if k == m {
            0.5 * a / SQRT_2
        } else {
            a / SQRT_2
        };
    }
    out
}

/// Any of the three field representations, with derivatives available.
#[derive(Debug, Clone)]
pub enum GridFunction {
    Nodal(Field),
    Modal(ModalField),
    Analytic(Arc<dyn Analytic>),
}

#[derive(Debug)]
struct Scaled {
    inner: Arc<dyn Analytic>,
    alpha: f64,
}

impl Analytic for Scaled {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        self.alpha * self.inner.derivative(x, order)
    }
}

impl GridFunction {
    pub fn analytic(f: impl Analytic + 'static) -> Self {
        GridFunction::Analytic(Arc::new(f))
    }

    pub fn nodal(values: Vec<f64>) -> Self {
        GridFunction::Nodal(Field::new("nodal", values))
    }

    /// Values at the grid nodes.
    pub fn values(&self, grid: &Grid) -> Vec<f64> {
        self.derivative_values(grid, 0)
            .expect("order 0 is always available")
    }

    /// Derivative of the given order at the grid nodes.
    pub fn derivative_values(&self, grid: &Grid, order: usize) -> Result<Vec<f64>> {
        match self {
            GridFunction::Nodal(f) => {
                if order == 0 {
                    if f.len() != grid.n_nodes() {
                        return Err(Error::Precondition(format!(
                            "field has {} values on a grid of {} nodes",
                            f.len(),
                            grid.n_nodes()
                        )));
                    }
                    Ok(f.values.clone())
                } else {
                    Ok(differentiate(f, grid, order)?.values)
                }
            }
            GridFunction::Modal(m) => Ok(m.derivative(order).values_on(grid)),
            GridFunction::Analytic(a) => Ok(grid.sample(|x| a.derivative(x, order))),
        }
    }

    /// Value at a point. Nodal fields are interpolated linearly.
    pub fn value_at(&self, grid: &Grid, x: f64) -> f64 {
        match self {
            GridFunction::Nodal(f) => {
                let h = grid.spacing();
                let n = grid.n_nodes();
                let pos = (x / h).clamp(0.0, (n - 1) as f64);
                let i = (pos.floor() as usize).min(n - 2);
                let r = pos - i as f64;
                if r == 0.0 {
                    f.values[i]
                } else {
                    (1.0 - r) * f.values[i] + r * f.values[i + 1]
                }
            }
            GridFunction::Modal(m) => m.value_at(x),
            GridFunction::Analytic(a) => a.value(x),
        }
    }

    /// Orthonormal cosine coefficients: exact for cosine-modal fields,
    /// by discrete cosine transform of the nodal values otherwise.
    pub fn cosine_coefficients(&self, grid: &Grid) -> Vec<f64> {
        match self {
            GridFunction::Modal(m) if m.parity == Parity::Cosine => m.coeffs.clone(),
            _ => cosine_coefficients(&self.values(grid)),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        match self {
            GridFunction::Nodal(f) => GridFunction::Nodal(Field::new(
                f.label.clone(),
                f.values.iter().map(|v| alpha * v).collect(),
            )),
            GridFunction::Modal(m) => GridFunction::Modal(ModalField {
                coeffs: m.coeffs.iter().map(|c| alpha * c).collect(),
                parity: m.parity,
            }),
            GridFunction::Analytic(a) => GridFunction::Analytic(Arc::new(Scaled {
                inner: Arc::clone(a),
                alpha,
            })),
        }
    }
}
