//! Transport of the reference annulus `r̄_Σ ≤ r ≤ r̲_Γ` onto the domain
//! between two starlike curves by linear interpolation of their radii.

use super::curves::RadialCurve;
use crate::{Error, Result};

/// Extrema of the entries and singular values of the triangular Jacobian
/// `[[a, c], [0, b]]` over a polar grid on the reference annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiMapDiagnostics {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub c_absmax: f64,
    pub sv_min: f64,
    pub sv_max: f64,
}

/// Singular values `(s_min, s_max)` of `[[a, c], [0, b]]`.
pub fn triangular_singular_values(a: f64, b: f64, c: f64) -> (f64, f64) {
    let t = a * a + b * b + c * c;
    let det = (a * b).abs();
    let disc = ((t - 2.0 * det) * (t + 2.0 * det)).max(0.0).sqrt();
    let s_max = (0.5 * (t + disc)).sqrt();
    // s_min s_max = |det|
    let s_min = if s_max > 0.0 { det / s_max } else { 0.0 };
    (s_min, s_max)
}

/// Jacobian entries `(a, b, c)` at the reference point `(r, θ)`.
pub fn phi_jacobian(
    sigma: &RadialCurve,
    gamma: &RadialCurve,
    r_sigma_upper: f64,
    r_gamma_lower: f64,
    r: f64,
    theta: f64,
) -> (f64, f64, f64) {
    let d = r_gamma_lower - r_sigma_upper;
    let (wg, ws) = ((r - r_sigma_upper) / d, (r_gamma_lower - r) / d);
    let (g, s) = (gamma.eval(theta), sigma.eval(theta));
    let (g1, s1) = (
        gamma.series().eval_derivative(theta, 1),
        sigma.series().eval_derivative(theta, 1),
    );
    let (dg, ds) = (g - r_gamma_lower, s - r_sigma_upper);
    let a = 1.0 + (dg - ds) / d;
    let b = 1.0 + (wg * dg + ws * ds) / r;
    let c = (wg * g1 + ws * s1) / r;
    (a, b, c)
}

/// Scans `radial × angular` grid points of the reference annulus.
///
/// Fails with `OrderingViolated` where `σ(θ) ≤ r̄_Σ < r̲_Γ ≤ γ(θ)` does not hold.
pub fn phi_jacobian_diagnostics(
    sigma: &RadialCurve,
    gamma: &RadialCurve,
    r_sigma_upper: f64,
    r_gamma_lower: f64,
    radial: usize,
    angular: usize,
) -> Result<PhiMapDiagnostics> {
    if !(r_sigma_upper < r_gamma_lower) || !(r_sigma_upper > 0.0) {
        return Err(Error::OrderingViolated {
            r: r_sigma_upper,
            theta: 0.0,
        });
    }
    if radial < 2 || angular < 1 {
        return Err(Error::BadNodeCount(radial.min(angular)));
    }
    let mut out = PhiMapDiagnostics {
        a_min: f64::INFINITY,
        a_max: f64::NEG_INFINITY,
        b_min: f64::INFINITY,
        b_max: f64::NEG_INFINITY,
        c_absmax: 0.0,
        sv_min: f64::INFINITY,
        sv_max: 0.0,
    };
    for j in 0..angular {
        let theta = std::f64::consts::TAU * j as f64 / angular as f64;
        if sigma.eval(theta) > r_sigma_upper {
            return Err(Error::OrderingViolated {
                r: r_sigma_upper,
                theta,
            });
        }
        if gamma.eval(theta) < r_gamma_lower {
            return Err(Error::OrderingViolated {
                r: r_gamma_lower,
                theta,
            });
        }
        for i in 0..radial {
            let r =
                r_sigma_upper + (r_gamma_lower - r_sigma_upper) * i as f64 / (radial - 1) as f64;
            let (a, b, c) = phi_jacobian(sigma, gamma, r_sigma_upper, r_gamma_lower, r, theta);
            let (lo, hi) = triangular_singular_values(a, b, c);
            out.a_min = out.a_min.min(a);
            out.a_max = out.a_max.max(a);
            out.b_min = out.b_min.min(b);
            out.b_max = out.b_max.max(b);
            out.c_absmax = out.c_absmax.max(c.abs());
            out.sv_min = out.sv_min.min(lo);
            out.sv_max = out.sv_max.max(hi);
        }
    }
    Ok(out)
}
