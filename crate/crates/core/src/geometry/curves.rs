use serde::{Deserialize, Serialize};

use super::fourier::{check_grid, TrigSeries};
use crate::{Error, Result};

/// Floating-point slack on the convexity constraint `h + h'' >= 0`.
pub const TOL_CONVEX: f64 = 1e-10;

/// How a coefficient vector describes the exterior boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameterization {
    /// Starlike curve `r(θ) e_r(θ)`.
    Radial,
    /// Convex curve given by its support function, reconstructed by the envelope.
    Support,
}

impl Parameterization {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameterization::Radial => "radial",
            Parameterization::Support => "support",
        }
    }
}

impl std::str::FromStr for Parameterization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "radial" => Ok(Parameterization::Radial),
            "support" => Ok(Parameterization::Support),
            other => Err(Error::Parse(format!("unknown parameterization `{other}`"))),
        }
    }
}

/// Starlike curve `θ ↦ r(θ) e_r(θ)` with a truncated Fourier radial function.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCurve {
    series: TrigSeries,
}

impl RadialCurve {
    /// Checks `r > 0` on the check grid.
    pub fn new(series: TrigSeries) -> Result<Self> {
        for theta in check_grid(series.order()) {
            let value = series.eval(theta);
            if !(value > 0.0) {
                return Err(Error::NonpositiveRadius { theta, value });
            }
        }
        Ok(Self { series })
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(TrigSeries::new(coeffs)?)
    }

    pub fn circle(radius: f64, order: usize) -> Result<Self> {
        Self::new(TrigSeries::constant(radius, order))
    }

    /// Fourier projection of the radial function of the centred ellipse with
    /// semi-axes `a` (along x) and `b` (along y).
    pub fn ellipse(a: f64, b: f64, order: usize) -> Result<Self> {
        let r = |t: f64| a * b / (b * b * t.cos().powi(2) + a * a * t.sin().powi(2)).sqrt();
        let m = (64 * (2 * order + 1)).max(4096);
        Self::new(TrigSeries::project(r, order, m)?)
    }

    pub fn series(&self) -> &TrigSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    pub fn eval_radial(&self, thetas: &[f64], derivative: u32) -> Vec<f64> {
        self.series.eval_many(thetas, derivative)
    }

    /// Extrema of `r` on the check grid.
    pub fn radial_range(&self) -> (f64, f64) {
        range_on_grid(&self.series)
    }

    /// Enclosed area `½∫ r² dθ`, exact for the truncated series.
    pub fn area(&self) -> f64 {
        0.5 * self.series.l2_norm_sq()
    }
}

/// Support function `h` of a convex body, restricted to the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    series: TrigSeries,
}

impl SupportFunction {
    /// Checks `h > 0` and `h + h'' >= -TOL_CONVEX` on the check grid.
    pub fn new(series: TrigSeries) -> Result<Self> {
        let grid = check_grid(series.order());
        for &theta in &grid {
            let value = series.eval(theta);
            if !(value > 0.0) {
                return Err(Error::NonpositiveRadius { theta, value });
            }
        }
        if let Some((theta, value)) = convexity_violation(&series, &grid, TOL_CONVEX) {
            return Err(Error::NotConvex { theta, value });
        }
        Ok(Self { series })
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(TrigSeries::new(coeffs)?)
    }

    pub fn disk(radius: f64, order: usize) -> Result<Self> {
        Self::new(TrigSeries::constant(radius, order))
    }

    pub fn series(&self) -> &TrigSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    /// Radius of curvature `h + h''` at `theta`.
    pub fn curvature_radius(&self, theta: f64) -> f64 {
        self.series.eval(theta) + self.series.eval_derivative(theta, 2)
    }
}

const NEWTON_STEPS: usize = 8;

/// Scans a periodic function given with its first two derivatives. Grid
/// values below `-tol` are reported directly; discrete local minima are
/// refined by Newton steps on the derivative so that dips between grid
/// points are caught too.
fn first_dip(f: impl Fn(f64) -> [f64; 3], grid: &[f64], tol: f64) -> Option<(f64, f64)> {
    let n = grid.len();
    let values: Vec<[f64; 3]> = grid.iter().map(|&t| f(t)).collect();
    for i in 0..n {
        let v = values[i][0];
        if v < -tol {
            return Some((grid[i], v));
        }
        if n < 3 || v > values[(i + n - 1) % n][0] || v > values[(i + 1) % n][0] {
            continue;
        }
        let half = 0.5 * std::f64::consts::TAU / n as f64;
        let (lo, hi) = (grid[i] - half, grid[i] + half);
        let mut t = grid[i];
        let mut d = values[i];
        for _ in 0..NEWTON_STEPS {
            if !(d[2] > 0.0) {
                break;
            }
            let next = (t - d[1] / d[2]).clamp(lo, hi);
            if next == t {
                break;
            }
            t = next;
            d = f(t);
        }
        if d[0] < -tol {
            return Some((t.rem_euclid(std::f64::consts::TAU), d[0]));
        }
    }
    None
}

/// First point where `h + h'' < -tol`, located on `grid` or between neighbouring grid points.
pub fn convexity_violation(h: &TrigSeries, grid: &[f64], tol: f64) -> Option<(f64, f64)> {
    let rho = |t: f64| {
        [
            h.eval(t) + h.eval_derivative(t, 2),
            h.eval_derivative(t, 1) + h.eval_derivative(t, 3),
            h.eval_derivative(t, 2) + h.eval_derivative(t, 4),
        ]
    };
    first_dip(rho, grid, tol)
}

/// First point where the polar curvature numerator `r² + 2r'² - r r''` is below `-tol`.
pub fn radial_convexity_violation(r: &TrigSeries, grid: &[f64], tol: f64) -> Option<(f64, f64)> {
    let numerator = |t: f64| {
        let g: Vec<f64> = (0..5).map(|k| r.eval_derivative(t, k)).collect();
        [
            g[0] * g[0] + 2.0 * g[1] * g[1] - g[0] * g[2],
            2.0 * g[0] * g[1] + 3.0 * g[1] * g[2] - g[0] * g[3],
            2.0 * g[1] * g[1] + 2.0 * g[0] * g[2] + 3.0 * g[2] * g[2] + 2.0 * g[1] * g[3]
                - g[0] * g[4],
        ]
    };
    first_dip(numerator, grid, tol)
}

pub(crate) fn range_on_grid(series: &TrigSeries) -> (f64, f64) {
    check_grid(series.order())
        .into_iter()
        .map(|t| series.eval(t))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Support-function coefficients of the translation by `(cx, cy)`: `cx cos θ + cy sin θ`.
pub fn translation_series(cx: f64, cy: f64, order: usize) -> TrigSeries {
    let mut s = TrigSeries::zeros(order.max(1));
    s.coeffs_mut()[1] = cy;
    s.coeffs_mut()[2] = cx;
    s
}
