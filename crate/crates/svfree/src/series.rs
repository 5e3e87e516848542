//! Truncated Taylor series in a local spatial offset, used to propagate
//! time derivatives through the momentum equation node by node.

use std::ops::{Add, Mul, Sub};

use crate::numerics::factorial;

/// Number of retained Taylor coefficients.
pub const LEN: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series(pub [f64; LEN]);

impl Series {
    pub fn zero() -> Self {
        Series([0.0; LEN])
    }

    pub fn constant(c: f64) -> Self {
        let mut s = Self::zero();
        s.0[0] = c;
        s
    }

    /// From derivative values `f, f', f'', ...` at the expansion point.
    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut s = Self::zero();
        for (i, (c, v)) in s.0.iter_mut().zip(d).enumerate() {
            *c = v / factorial(i);
        }
        s
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative_value(&self, k: usize) -> f64 {
        self.0[k] * factorial(k)
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut s = *self;
        s.0.iter_mut().for_each(|c| *c *= a);
        s
    }

    /// Derivative in the offset; the top coefficient becomes zero.
    pub fn deriv(&self) -> Self {
        let mut s = Self::zero();
        for i in 0..LEN - 1 {
            s.0[i] = (i + 1) as f64 * self.0[i + 1];
        }
        s
    }

    pub fn recip(&self) -> Self {
        Series::constant(1.0).div(self)
    }

    /// `self / b` for `b(0) != 0`.
    pub fn div(&self, b: &Series) -> Self {
        let mut q = Self::zero();
        let b0 = b.0[0];
        for i in 0..LEN {
            let mut acc = self.0[i];
            for j in 1..=i {
                acc -= b.0[j] * q.0[i - j];
            }
            q.0[i] = acc / b0;
        }
        q
    }

    /// `self / b` for `b(0) = 0 != b'(0)`, dropping `self(0)`.
    ///
    /// Returns the quotient and the dropped leading coefficient, which must
    /// vanish for the quotient to be the true one-sided limit.
    pub fn div_vanishing(&self, b: &Series) -> (Self, f64) {
        let mut num = Self::zero();
        let mut den = Self::zero();
        num.0[..LEN - 1].copy_from_slice(&self.0[1..]);
        den.0[..LEN - 1].copy_from_slice(&b.0[1..]);
        (num.div(&den), self.0[0])
    }

    /// Largest coefficient magnitude among the first `k`.
    pub fn head_norm(&self, k: usize) -> f64 {
        self.0[..k.min(LEN)].iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, o: Series) -> Series {
        let mut s = self;
        s.0.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        s
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        let mut s = self;
        s.0.iter_mut().zip(o.0).for_each(|(a, b)| *a -= b);
        s
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        let mut s = Series::zero();
        for i in 0..LEN {
            if self.0[i] == 0.0 {
                continue;
            }
            for j in 0..LEN - i {
                s.0[i + j] += self.0[i] * o.0[j];
            }
        }
        s
    }
}
