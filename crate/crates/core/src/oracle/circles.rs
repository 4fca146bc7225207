use std::f64::consts::{PI, TAU};

use super::lambert::lambert_w;
use crate::{Error, Result};

/// Optimal exterior radius `F(r_Σ) = 1/(λ W(1/(λ r_Σ)))` for a circular hole.
pub fn free_radius(r_sigma: f64, lambda: f64) -> f64 {
    1.0 / (lambda * lambert_w(1.0 / (lambda * r_sigma)))
}

/// `J(r_Γ, r_Σ) = 2π/log(r_Γ/r_Σ) + πλ²(r_Γ² − r_Σ²)`.
pub fn energy_circles(r_gamma: f64, r_sigma: f64, lambda: f64) -> Result<f64> {
    check_annulus(r_gamma, r_sigma)?;
    Ok(TAU / (r_gamma / r_sigma).ln()
        + PI * lambda * lambda * (r_gamma * r_gamma - r_sigma * r_sigma))
}

/// `∂J/∂r_Γ = −2π/(r_Γ log²(r_Γ/r_Σ)) + 2πλ² r_Γ`.
pub fn energy_circles_derivative(r_gamma: f64, r_sigma: f64, lambda: f64) -> Result<f64> {
    check_annulus(r_gamma, r_sigma)?;
    let l = (r_gamma / r_sigma).ln();
    Ok(-TAU / (r_gamma * l * l) + TAU * lambda * lambda * r_gamma)
}

/// Flux `−∂u/∂n` on the exterior circle for data 1 inside and 0 outside.
pub fn outer_flux(r_gamma: f64, r_sigma: f64) -> Result<f64> {
    check_annulus(r_gamma, r_sigma)?;
    Ok(1.0 / (r_gamma * (r_gamma / r_sigma).ln()))
}

/// Harmonic state `log(r/r_Γ)/log(r_Σ/r_Γ)` at radius `r`.
pub fn annulus_state(r: f64, r_gamma: f64, r_sigma: f64) -> Result<f64> {
    check_annulus(r_gamma, r_sigma)?;
    Ok((r / r_gamma).ln() / (r_sigma / r_gamma).ln())
}

pub(crate) fn check_annulus(r_gamma: f64, r_sigma: f64) -> Result<()> {
    if !(r_sigma > 0.0) || !(r_gamma > r_sigma) {
        return Err(Error::DegenerateAnnulus { r_gamma, r_sigma });
    }
    Ok(())
}
