//! Truncated real Fourier series on the unit circle.
//!
//! Coefficients are stored in the order `a0, a-1, a1, a-2, a2, ..., a-N, aN`,
//! where `a-l` multiplies `sin(l θ)` and `al` multiplies `cos(l θ)`:
//!
//! ```text
//! f(θ) = a0 + Σ_{l=1..N} a-l sin(lθ) + al cos(lθ)
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::{Error, Result};

/// Index of the `sin(lθ)` coefficient.
#[inline]
pub fn sin_index(l: usize) -> usize {
    debug_assert!(l >= 1);
    2 * l - 1
}

/// Index of the `cos(lθ)` coefficient (`cos_index(0) == 0` is the mean).
#[inline]
pub fn cos_index(l: usize) -> usize {
    if l == 0 {
        0
    } else {
        2 * l
    }
}

/// Frequency `l` of the coefficient stored at `index`.
#[inline]
pub fn mode_of_index(index: usize) -> usize {
    index.div_ceil(2)
}

/// `m` equispaced angles `2πi/m` on `[0, 2π)`.
pub fn equispaced(m: usize) -> Vec<f64> {
    (0..m).map(|i| TAU * i as f64 / m as f64).collect()
}

/// Angles of the dense grid used to certify sign conditions: `16(2N+1)` points.
pub fn check_grid(order: usize) -> Vec<f64> {
    equispaced(16 * (2 * order + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    coeffs: Vec<f64>,
}

impl TrigSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::BadCoefficientCount(coeffs.len()));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; 2 * order + 1],
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    /// Unit coefficient at `index`, zeros elsewhere.
    pub fn basis(order: usize, index: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[index] = 1.0;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// `k`-th derivative at `theta` (`k = 0` evaluates the series).
    pub fn eval_derivative(&self, theta: f64, k: u32) -> f64 {
        let shift = k as f64 * FRAC_PI_2;
        let mut acc = if k == 0 { self.coeffs[0] } else { 0.0 };
        for l in 1..=self.order() {
            let lf = l as f64;
            let scale = lf.powi(k as i32);
            let phase = lf * theta + shift;
            let (s, c) = phase.sin_cos();
            acc += scale * (self.coeffs[sin_index(l)] * s + self.coeffs[cos_index(l)] * c);
        }
        acc
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_derivative(theta, 0)
    }

    pub fn eval_many(&self, thetas: &[f64], k: u32) -> Vec<f64> {
        thetas.iter().map(|&t| self.eval_derivative(t, k)).collect()
    }

    /// Coefficients of the `k`-th derivative series.
    pub fn derivative(&self, k: u32) -> Self {
        let mut out = Self::zeros(self.order());
        for l in 1..=self.order() {
            let lf = (l as f64).powi(k as i32);
            let (a, b) = (self.coeffs[sin_index(l)], self.coeffs[cos_index(l)]);
            // d/dθ (a sin + b cos) = l (a cos - b sin)
            let (mut s, mut c) = (a, b);
            for _ in 0..k % 4 {
                let (ns, nc) = (-c, s);
                s = ns;
                c = nc;
            }
            out.coeffs[sin_index(l)] = lf * s;
            out.coeffs[cos_index(l)] = lf * c;
        }
        out
    }

    /// Discrete Fourier projection of equispaced samples `values[i] = f(2πi/M)`.
    ///
    /// Exact for trigonometric polynomials of degree `< M/2` when `order < M/2`.
    pub fn from_samples(values: &[f64], order: usize) -> Result<Self> {
        let m = values.len();
        if 2 * order >= m {
            return Err(Error::DimensionMismatch {
                expected: 2 * order + 1,
                got: m,
            });
        }
        let mut coeffs = vec![0.0; 2 * order + 1];
        let w = 1.0 / m as f64;
        coeffs[0] = values.iter().sum::<f64>() * w;
        for l in 1..=order {
            let (mut s, mut c) = (0.0, 0.0);
            for (i, v) in values.iter().enumerate() {
                let (si, ci) = (TAU * (l * i % m) as f64 / m as f64).sin_cos();
                s += v * si;
                c += v * ci;
            }
            coeffs[sin_index(l)] = 2.0 * w * s;
            coeffs[cos_index(l)] = 2.0 * w * c;
        }
        Ok(Self { coeffs })
    }

    /// Projects a periodic function on `order` modes by trapezoid quadrature on `m` nodes.
    pub fn project<F: Fn(f64) -> f64>(f: F, order: usize, m: usize) -> Result<Self> {
        let values: Vec<f64> = equispaced(m).into_iter().map(f).collect();
        Self::from_samples(&values, order)
    }

    /// `∫_0^{2π} f(θ)² dθ`.
    pub fn l2_norm_sq(&self) -> f64 {
        let tail: f64 = self.coeffs[1..].iter().map(|c| c * c).sum();
        TAU * self.coeffs[0] * self.coeffs[0] + PI * tail
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &Self) -> Result<Self> {
        if other.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    /// Same series with a larger (zero-padded) or equal truncation order.
    pub fn padded(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(2 * order.max(self.order()) + 1, 0.0);
        Self { coeffs }
    }
}
