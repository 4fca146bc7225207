use std::f64::consts::TAU;

use super::curves::{RadialCurve, SupportFunction, TOL_CONVEX};
use super::fourier::{equispaced, TrigSeries};
use crate::{Error, Result};

pub type Point = [f64; 2];

#[inline]
pub(crate) fn e_r(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    [c, s]
}

#[inline]
pub(crate) fn e_theta(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    [-s, c]
}

#[inline]
pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// A closed curve sampled at equispaced parameter values `θ_i = 2πi/M`.
///
/// The parameterization runs counterclockwise. `normals` point away from the
/// region enclosed by the curve and `curvature` is positive for convex arcs
/// under that convention.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBoundary {
    pub thetas: Vec<f64>,
    pub nodes: Vec<Point>,
    pub normals: Vec<Point>,
    pub tangents: Vec<Point>,
    /// `|dx/dθ|`.
    pub speed: Vec<f64>,
    pub curvature: Vec<f64>,
}

impl DiscreteBoundary {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Trapezoid arclength weights `speed_i · 2π/M`.
    pub fn arc_weights(&self) -> Vec<f64> {
        let h = TAU / self.len() as f64;
        self.speed.iter().map(|s| s * h).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.arc_weights().iter().sum()
    }

    /// `∫ f ds` of nodal values by the trapezoid rule.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let h = TAU / self.len() as f64;
        values
            .iter()
            .zip(&self.speed)
            .map(|(v, s)| v * s)
            .sum::<f64>()
            * h
    }

    /// Signed area `½∮ x·n ds` enclosed by the curve.
    pub fn enclosed_area(&self) -> f64 {
        let xn: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.normals)
            .map(|(x, n)| dot(*x, *n))
            .collect();
        0.5 * self.integrate(&xn)
    }

    /// Even-odd point-in-polygon test against the node polyline.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.nodes[i], self.nodes[j]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

fn check_node_count(m: usize) -> Result<()> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::BadNodeCount(m));
    }
    Ok(())
}

/// Samples the starlike curve `γ(θ) e_r(θ)` at `m` equispaced parameters.
pub fn discretize_radial(curve: &RadialCurve, m: usize) -> Result<DiscreteBoundary> {
    check_node_count(m)?;
    let thetas = equispaced(m);
    let s = curve.series();
    let mut out = DiscreteBoundary {
        thetas: thetas.clone(),
        nodes: Vec::with_capacity(m),
        normals: Vec::with_capacity(m),
        tangents: Vec::with_capacity(m),
        speed: Vec::with_capacity(m),
        curvature: Vec::with_capacity(m),
    };
    for &t in &thetas {
        let (g, g1, g2) = (s.eval(t), s.eval_derivative(t, 1), s.eval_derivative(t, 2));
        if !(g > 0.0) {
            return Err(Error::NonpositiveRadius { theta: t, value: g });
        }
        let (er, et) = (e_r(t), e_theta(t));
        let speed = (g * g + g1 * g1).sqrt();
        out.nodes.push([g * er[0], g * er[1]]);
        out.tangents.push([
            (g1 * er[0] + g * et[0]) / speed,
            (g1 * er[1] + g * et[1]) / speed,
        ]);
        out.normals.push([
            (g * er[0] - g1 * et[0]) / speed,
            (g * er[1] - g1 * et[1]) / speed,
        ]);
        out.speed.push(speed);
        out.curvature
            .push((g * g + 2.0 * g1 * g1 - g * g2) / speed.powi(3));
    }
    Ok(out)
}

/// Reconstructs the convex curve `h e_r + h' e_θ` from its support function.
///
/// Normals are `e_r`, tangents `e_θ`, the speed is the radius of curvature
/// `h + h''` and the curvature its reciprocal (infinite where it vanishes).
pub fn envelope(h: &SupportFunction, m: usize) -> Result<DiscreteBoundary> {
    envelope_series(h.series(), m)
}

pub(crate) fn envelope_series(h: &TrigSeries, m: usize) -> Result<DiscreteBoundary> {
    check_node_count(m)?;
    let thetas = equispaced(m);
    let mut out = DiscreteBoundary {
        thetas: thetas.clone(),
        nodes: Vec::with_capacity(m),
        normals: Vec::with_capacity(m),
        tangents: Vec::with_capacity(m),
        speed: Vec::with_capacity(m),
        curvature: Vec::with_capacity(m),
    };
    for &t in &thetas {
        let (v, v1, v2) = (h.eval(t), h.eval_derivative(t, 1), h.eval_derivative(t, 2));
        let rho = v + v2;
        if rho < -TOL_CONVEX {
            return Err(Error::NotConvex {
                theta: t,
                value: rho,
            });
        }
        let (er, et) = (e_r(t), e_theta(t));
        out.nodes
            .push([v * er[0] + v1 * et[0], v * er[1] + v1 * et[1]]);
        out.normals.push(er);
        out.tangents.push(et);
        let rho = rho.max(0.0);
        out.speed.push(rho);
        out.curvature
            .push(if rho > 0.0 { 1.0 / rho } else { f64::INFINITY });
    }
    Ok(out)
}

/// Normal velocity and the tangential term of the deformation `V = q e_r + q' e_θ`.
///
/// Returns nodal `V_n = q` and `V·∇_τ V_n = (q')² / sqrt(h² + h'²)`.
pub fn support_perturbation_field(
    h: &SupportFunction,
    q: &TrigSeries,
    m: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if q.order() != h.order() {
        return Err(Error::DimensionMismatch {
            expected: h.series().len(),
            got: q.len(),
        });
    }
    let thetas = equispaced(m);
    let vn = q.eval_many(&thetas, 0);
    let tangential = thetas
        .iter()
        .map(|&t| {
            let (hv, h1) = (h.eval(t), h.series().eval_derivative(t, 1));
            let q1 = q.eval_derivative(t, 1);
            q1 * q1 / (hv * hv + h1 * h1).sqrt()
        })
        .collect();
    Ok((vn, tangential))
}
