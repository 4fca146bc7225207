use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{sample_interior, RandomBoundaryModel, SamplerKind};
use crate::calculus::{energy, evaluate, h_half_coeff_inner, ShapeSetup};
use crate::geometry::{Parameterization, RadialCurve, TrigSeries};
use crate::{Error, Result};

/// How the expectation over Σ was approximated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    Mc,
    QmcHalton,
    /// Exact two-node rule for a two-point radius law.
    TwoPoint,
}

impl From<SamplerKind> for EstimatorKind {
    fn from(k: SamplerKind) -> Self {
        match k {
            SamplerKind::Mc => EstimatorKind::Mc,
            SamplerKind::QmcHalton => EstimatorKind::QmcHalton,
        }
    }
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Mc => "mc",
            EstimatorKind::QmcHalton => "qmc-halton",
            EstimatorKind::TwoPoint => "two-point",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorResult {
    pub mean_value: f64,
    pub num_samples: usize,
    pub sampler_kind: EstimatorKind,
    pub per_sample_values: Vec<f64>,
    /// Quadrature weights when they are not uniform.
    pub weights: Option<Vec<f64>>,
    pub per_run_values: Vec<f64>,
}

impl EstimatorResult {
    fn from_values(values: Vec<f64>, weights: Option<Vec<f64>>, kind: EstimatorKind) -> Self {
        let mean_value = match &weights {
            Some(w) => values.iter().zip(w).map(|(v, w)| v * w).sum(),
            None => values.iter().sum::<f64>() / values.len() as f64,
        };
        Self {
            mean_value,
            num_samples: values.len(),
            sampler_kind: kind,
            per_sample_values: values,
            weights,
            per_run_values: Vec::new(),
        }
    }

    /// Averages runs into one result; per-run means are kept.
    pub fn average_runs(runs: &[EstimatorResult]) -> Result<Self> {
        let first = runs
            .first()
            .ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
        let per_run_values: Vec<f64> = runs.iter().map(|r| r.mean_value).collect();
        Ok(Self {
            mean_value: per_run_values.iter().sum::<f64>() / runs.len() as f64,
            num_samples: runs.iter().map(|r| r.num_samples).sum(),
            sampler_kind: first.sampler_kind,
            per_sample_values: Vec::new(),
            weights: None,
            per_run_values,
        })
    }
}

/// Mean gradient over the samples and both norm conventions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientEstimate {
    /// Preconditioned coefficient gradient averaged coefficientwise.
    pub mean_gradient: Vec<f64>,
    /// H^{1/2} norm of `mean_gradient`; the headline metric.
    pub norm_of_mean: f64,
    pub mean_of_norms: f64,
    pub num_samples: usize,
    pub sampler_kind: EstimatorKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub objective: EstimatorResult,
    pub gradient: GradientEstimate,
}

/// Inner curves and weights used to approximate an expectation over the model.
pub fn quadrature_nodes(
    model: &RandomBoundaryModel,
    num_samples: usize,
    sampler: SamplerKind,
) -> Result<(Vec<RadialCurve>, Option<Vec<f64>>, EstimatorKind)> {
    if let Some(tp) = model.two_point_mean() {
        let low = shifted(model.mean_curve(), tp.low)?;
        let high = shifted(model.mean_curve(), tp.high)?;
        return Ok((
            vec![low, high],
            Some(vec![tp.p, 1.0 - tp.p]),
            EstimatorKind::TwoPoint,
        ));
    }
    if num_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "num_samples",
            value: 0.0,
        });
    }
    if model.is_deterministic() {
        return Ok((vec![model.mean_curve().clone()], None, sampler.into()));
    }
    let curves = (0..num_samples as u64)
        .into_par_iter()
        .map(|i| sample_interior(model, i, sampler))
        .collect::<Result<Vec<_>>>()?;
    Ok((curves, None, sampler.into()))
}

fn shifted(c: &RadialCurve, offset: f64) -> Result<RadialCurve> {
    let mut s: TrigSeries = c.series().clone();
    s.coeffs_mut()[0] += offset;
    RadialCurve::new(s)
}

/// `E[J(h, Σ)]` over the model.
pub fn estimate_expected_objective(
    h: &TrigSeries,
    kind: Parameterization,
    model: &RandomBoundaryModel,
    setup: &ShapeSetup,
    num_samples: usize,
    sampler: SamplerKind,
) -> Result<EstimatorResult> {
    let (curves, weights, ek) = quadrature_nodes(model, num_samples, sampler)?;
    let values = curves
        .par_iter()
        .map(|sigma| energy(h, kind, sigma, setup))
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimatorResult::from_values(values, weights, ek))
}

/// Expected objective and mean preconditioned gradient in one pass.
pub fn estimate_expectation(
    h: &TrigSeries,
    kind: Parameterization,
    model: &RandomBoundaryModel,
    setup: &ShapeSetup,
    num_samples: usize,
    sampler: SamplerKind,
) -> Result<Expectation> {
    let (curves, weights, ek) = quadrature_nodes(model, num_samples, sampler)?;
    let evals = curves
        .par_iter()
        .map(|sigma| evaluate(h, kind, sigma, setup).map(|e| (e.energy, e.gradient)))
        .collect::<Result<Vec<_>>>()?;
    let n = evals.len();
    let w: Vec<f64> = weights.clone().unwrap_or_else(|| vec![1.0 / n as f64; n]);
    let mut mean_gradient = vec![0.0; h.len()];
    let mut mean_of_norms = 0.0;
    for ((_, g), wi) in evals.iter().zip(&w) {
        for (m, x) in mean_gradient.iter_mut().zip(&g.preconditioned) {
            *m += wi * x;
        }
        mean_of_norms += wi * g.norm();
    }
    let norm_of_mean = h_half_coeff_inner(&mean_gradient, &mean_gradient).sqrt();
    let values = evals.into_iter().map(|(j, _)| j).collect();
    Ok(Expectation {
        objective: EstimatorResult::from_values(values, weights, ek),
        gradient: GradientEstimate {
            mean_gradient,
            norm_of_mean,
            mean_of_norms,
            num_samples: n,
            sampler_kind: ek,
        },
    })
}

pub fn estimate_expected_gradient_norm(
    h: &TrigSeries,
    kind: Parameterization,
    model: &RandomBoundaryModel,
    setup: &ShapeSetup,
    num_samples: usize,
    sampler: SamplerKind,
) -> Result<GradientEstimate> {
    Ok(estimate_expectation(h, kind, model, setup, num_samples, sampler)?.gradient)
}
