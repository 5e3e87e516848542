//! Closed-form functions on `[0, 1]` with derivatives of every order.

use std::f64::consts::PI;
use std::fmt::Debug;

use crate::numerics::{cospi, sinpi};

/// A function with exact derivatives of arbitrary order.
pub trait Analytic: Debug + Send + Sync {
    /// The `order`-th derivative at `x` (order 0 is the value).
    fn derivative(&self, x: f64, order: usize) -> f64;

    fn value(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }
}

/// `sum c_k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }
}

impl Analytic for Polynomial {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        let mut acc = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate().skip(order).rev() {
            let falling = ((k - order + 1)..=k).fold(1.0, |p, j| p * j as f64);
            acc = acc * x + c * falling;
        }
        acc
    }
}

/// `a sin(pi x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineBump {
    pub amplitude: f64,
}

impl Analytic for SineBump {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        let scale = self.amplitude * PI.powi(order as i32);
        scale
            * match order % 4 {
                0 => sinpi(x),
                1 => cospi(x),
                2 => -sinpi(x),
                _ => -cospi(x),
            }
    }
}

/// The boundary distance `d(x) = min(x, 1 - x)`.
///
/// At the kink the derivative is taken from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance;

impl Analytic for Distance {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        let left = x <= 0.5;
        match order {
            0 => x.min(1.0 - x),
            1 => {
                if left {
                    1.0
                } else {
                    -1.0
                }
            }
            _ => 0.0,
        }
    }
}

/// `c0 + sum a_k cos(k pi x)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CosineSeries {
    pub constant: f64,
    pub terms: Vec<(f64, f64)>,
}

impl CosineSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    /// `amplitude * cos(mode pi x)`.
    pub fn single(mode: f64, amplitude: f64) -> Self {
        Self {
            constant: 0.0,
            terms: vec![(mode, amplitude)],
        }
    }
}

impl Analytic for CosineSeries {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        let mut acc = if order == 0 { self.constant } else { 0.0 };
        for &(k, a) in &self.terms {
            let s = a * (k * PI).powi(order as i32);
            let kx = k * x;
            acc += s * match order % 4 {
                0 => cospi(kx),
                1 => -sinpi(kx),
                2 => -cospi(kx),
                _ => sinpi(kx),
            };
        }
        acc
    }
}

/// Adapts a pair of closures (value, derivative of any order) to [`Analytic`].
pub struct ClosureFn<F>
where
    F: Fn(f64, usize) -> f64 + Send + Sync,
{
    pub label: &'static str,
    pub f: F,
}

impl<F> Debug for ClosureFn<F>
where
    F: Fn(f64, usize) -> f64 + Send + Sync,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClosureFn({})", self.label)
    }
}

impl<F> Analytic for ClosureFn<F>
where
    F: Fn(f64, usize) -> f64 + Send + Sync,
{
    fn derivative(&self, x: f64, order: usize) -> f64 {
        (self.f)(x, order)
    }
}
