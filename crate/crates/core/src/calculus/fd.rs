use serde::Serialize;

use super::evaluate::{energy, evaluate, ShapeSetup};
use super::hessian::HessianContext;
use crate::geometry::{Parameterization, RadialCurve, TrigSeries};
use crate::Result;

/// Default centered-difference step for gradients, `≈ eps^{1/3}` scaled to unit-size coefficients.
pub const FD_GRADIENT_STEP: f64 = 1e-5;
pub const FD_HESSIAN_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdEntry {
    pub index: usize,
    pub analytic: f64,
    pub finite_difference: f64,
    pub rel_error: f64,
}

/// `|a − f| / max(|a|, |f|, floor)`.
pub fn relative_error(analytic: f64, fd: f64, floor: f64) -> f64 {
    (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(floor)
}

/// Compares coefficient gradient entries against centered differences of `J`.
///
/// The error floor is `1e-6 |J|`, below which entries count as zero.
pub fn fd_gradient_check(
    outer: &TrigSeries,
    kind: Parameterization,
    sigma: &RadialCurve,
    setup: &ShapeSetup,
    indices: &[usize],
    step: f64,
) -> Result<Vec<FdEntry>> {
    let eval = evaluate(outer, kind, sigma, setup)?;
    let floor = 1e-6 * eval.energy.abs();
    indices
        .iter()
        .map(|&index| {
            let mut plus = outer.clone();
            plus.coeffs_mut()[index] += step;
            let mut minus = outer.clone();
            minus.coeffs_mut()[index] -= step;
            let fd = (energy(&plus, kind, sigma, setup)? - energy(&minus, kind, sigma, setup)?)
                / (2.0 * step);
            let analytic = eval.gradient.coeffs[index];
            Ok(FdEntry {
                index,
                analytic,
                finite_difference: fd,
                rel_error: relative_error(analytic, fd, floor),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdHessianEntry {
    /// `I₁ + I₂`.
    pub form: f64,
    pub second_variation: f64,
    pub second_difference: f64,
    pub form_rel_error: f64,
    pub second_variation_rel_error: f64,
}

/// `(J(h+εq) − 2J(h) + J(h−εq))/ε²` against both Hessian expressions.
pub fn fd_hessian_check(
    outer: &TrigSeries,
    kind: Parameterization,
    sigma: &RadialCurve,
    q: &TrigSeries,
    setup: &ShapeSetup,
    step: f64,
) -> Result<FdHessianEntry> {
    let ctx = HessianContext::new(outer, kind, sigma, setup)?;
    let form = ctx.quadratic_form(q)?.value;
    let second_variation = ctx.second_variation(q)?;
    let j0 = energy(outer, kind, sigma, setup)?;
    let jp = energy(&outer.axpy(step, q)?, kind, sigma, setup)?;
    let jm = energy(&outer.axpy(-step, q)?, kind, sigma, setup)?;
    let second_difference = (jp - 2.0 * j0 + jm) / (step * step);
    let floor = 1e-9;
    Ok(FdHessianEntry {
        form,
        second_variation,
        second_difference,
        form_rel_error: relative_error(form, second_difference, floor),
        second_variation_rel_error: relative_error(second_variation, second_difference, floor),
    })
}
