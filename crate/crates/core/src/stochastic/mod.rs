//! Random inner boundaries, sampling and the projected stochastic gradient method.

mod estimator;
mod halton;
mod model;
mod sgd;

pub use estimator::{
    estimate_expectation, estimate_expected_gradient_norm, estimate_expected_objective,
    quadrature_nodes, EstimatorKind, EstimatorResult, Expectation, GradientEstimate,
};
pub use halton::{primes, radical_inverse, Halton};
pub use model::{
    sample_interior, RandomBoundaryModel, SamplerKind, TwoPointOffset, RESAMPLE_LIMIT,
};
pub use sgd::{
    run_sgd, run_sgd_with, sgd_step, HistoryEntry, MeanShape, ModelConfig, Schedule, SgdConfig,
    SgdState, StepContext, Trajectory, DEFAULT_MAX_RETRIES,
};

use crate::calculus::{evaluate, CoefficientGradient, ShapeSetup};
use crate::geometry::{Parameterization, RadialCurve, TrigSeries};
use crate::Result;

/// Preconditioned coefficient gradient `G(h, ξ)` for one inner curve.
pub fn stochastic_gradient(
    h: &TrigSeries,
    sigma: &RadialCurve,
    lambda: f64,
    kind: Parameterization,
) -> Result<CoefficientGradient> {
    Ok(evaluate(h, kind, sigma, &ShapeSetup::with_lambda(lambda))?.gradient)
}
