use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::fit::{fit_loglog, LogLogFit};
use crate::calculus::{h_half_weight, ShapeSetup};
use crate::geometry::{Parameterization, TrigSeries};
use crate::oracle::{energy_circles, free_radius};
use crate::stochastic::{
    estimate_expectation, run_sgd, MeanShape, RandomBoundaryModel, SamplerKind, SgdConfig,
};
use crate::{Error, Result};

pub const DEFAULT_K_GRID: [u64; 7] = [100, 200, 500, 1000, 2000, 5000, 10000];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RatesConfig {
    pub sgd: SgdConfig,
    pub k_grid: Vec<u64>,
    pub seeds: Vec<u64>,
    pub estimator_samples: usize,
    pub estimator_sampler: SamplerKind,
    /// Length of the run whose end point seeds the reference minimization.
    pub reference_iterations: u64,
    pub reference_seed: u64,
    /// Newton iterations on the sample-average objective.
    pub polish_iterations: usize,
    /// Samples averaged for the Hessian used by the polishing Newton steps.
    pub polish_hessian_samples: usize,
}

impl Default for RatesConfig {
    fn default() -> Self {
        Self {
            sgd: SgdConfig::default(),
            k_grid: DEFAULT_K_GRID.to_vec(),
            seeds: vec![1, 2, 3],
            estimator_samples: 1000,
            estimator_sampler: SamplerKind::QmcHalton,
            reference_iterations: 20_000,
            reference_seed: 1000,
            polish_iterations: 12,
            polish_hessian_samples: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JStarSource {
    Oracle,
    /// Minimum of the sample-average objective, reached from a long run.
    ReferenceRun,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaaMinimum {
    pub h: TrigSeries,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatesData {
    pub k: Vec<u64>,
    /// `E[J(h_K)] − J*` averaged over seeds.
    pub cost_gap: Vec<f64>,
    /// Norm of the expected preconditioned gradient, averaged over seeds.
    pub grad_norm: Vec<f64>,
    pub expected_objective: Vec<f64>,
    /// Indexed `[seed][k]`.
    pub per_seed_cost_gap: Vec<Vec<f64>>,
    pub per_seed_grad_norm: Vec<Vec<f64>>,
    pub j_star: f64,
    pub j_star_source: JStarSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFits {
    pub cost: LogLogFit,
    pub gradient: LogLogFit,
}

impl RatesData {
    pub fn fit(&self) -> Result<RateFits> {
        let k: Vec<f64> = self.k.iter().map(|&k| k as f64).collect();
        Ok(RateFits {
            cost: fit_loglog(&k, &self.cost_gap)?,
            gradient: fit_loglog(&k, &self.grad_norm)?,
        })
    }
}

/// Exact optimum for a deterministic concentric configuration.
pub fn oracle_j_star(cfg: &SgdConfig) -> Option<f64> {
    match cfg.model.mean {
        MeanShape::Circle { radius }
            if !cfg.model.flat_amplitudes && cfg.model.amplitude == 0.0 =>
        {
            let r = free_radius(radius, cfg.lambda);
            energy_circles(r, radius, cfg.lambda).ok()
        }
        _ => None,
    }
}

fn raw_mean_gradient(
    h: &TrigSeries,
    kind: Parameterization,
    model: &RandomBoundaryModel,
    setup: &ShapeSetup,
    samples: usize,
    sampler: SamplerKind,
) -> Result<(f64, Vec<f64>, f64)> {
    let ex = estimate_expectation(h, kind, model, setup, samples, sampler)?;
    let raw = ex
        .gradient
        .mean_gradient
        .iter()
        .enumerate()
        .map(|(i, g)| g * h_half_weight(i))
        .collect();
    Ok((ex.objective.mean_value, raw, ex.gradient.norm_of_mean))
}

/// Minimizes the sample-average objective by Newton steps with a Hessian
/// from centred differences over the first `hessian_samples` samples.
#[allow(clippy::too_many_arguments)]
pub fn saa_minimize(
    h0: &TrigSeries,
    kind: Parameterization,
    model: &RandomBoundaryModel,
    setup: &ShapeSetup,
    samples: usize,
    sampler: SamplerKind,
    hessian_samples: usize,
    iterations: usize,
) -> Result<SaaMinimum> {
    let n = h0.len();
    let eps = 1e-5;
    let hs = hessian_samples.clamp(1, samples);
    let mut hess = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut p = h0.clone();
        p.coeffs_mut()[j] += eps;
        let mut m = h0.clone();
        m.coeffs_mut()[j] -= eps;
        let (_, gp, _) = raw_mean_gradient(&p, kind, model, setup, hs, sampler)?;
        let (_, gm, _) = raw_mean_gradient(&m, kind, model, setup, hs, sampler)?;
        for i in 0..n {
            hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * eps);
        }
    }
    let hess = (&hess + hess.transpose()) * 0.5;
    let lu = hess.lu();

    let mut h = h0.clone();
    let (mut value, mut grad, mut norm) =
        raw_mean_gradient(&h, kind, model, setup, samples, sampler)?;
    let mut done = 0;
    for _ in 0..iterations {
        let dir = lu
            .solve(&DVector::from_vec(grad.clone()))
            .ok_or(Error::SingularSystem { pivot_ratio: 0.0 })?;
        let dir = TrigSeries::new(dir.as_slice().to_vec())?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..20 {
            let cand = h.axpy(-t, &dir)?;
            if let Ok(r) = raw_mean_gradient(&cand, kind, model, setup, samples, sampler) {
                if r.0 <= value {
                    accepted = Some((cand, r));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((cand, (v, g, nm))) = accepted else {
            break;
        };
        done += 1;
        let stalled = value - v <= 1e-15 * value.abs();
        h = cand;
        value = v;
        grad = g;
        norm = nm;
        if stalled {
            break;
        }
    }
    Ok(SaaMinimum {
        h,
        value,
        grad_norm: norm,
        iterations: done,
    })
}

/// Resolves `J*`: the oracle for concentric deterministic runs, otherwise the
/// polished end point of a reference run.
pub fn resolve_j_star(cfg: &RatesConfig) -> Result<(f64, JStarSource)> {
    if let Some(j) = oracle_j_star(&cfg.sgd) {
        return Ok((j, JStarSource::Oracle));
    }
    let mut reference = cfg.sgd.clone();
    reference.iterations = cfg.reference_iterations;
    reference.seed = cfg.reference_seed;
    reference.snapshots.clear();
    let end = run_sgd(&reference)?.final_iterate;
    let model = cfg.sgd.build_model()?;
    let min = saa_minimize(
        &end,
        cfg.sgd.parameterization,
        &model,
        &cfg.sgd.setup(),
        cfg.estimator_samples,
        cfg.estimator_sampler,
        cfg.polish_hessian_samples,
        cfg.polish_iterations,
    )?;
    Ok((min.value, JStarSource::ReferenceRun))
}

/// Runs one trajectory per seed and evaluates the estimators at each `K`.
pub fn run_rates_campaign(cfg: &RatesConfig) -> Result<RatesData> {
    if cfg.seeds.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut grid = cfg.k_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let k_max = *grid
        .last()
        .ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
    let (j_star, j_star_source) = resolve_j_star(cfg)?;
    let setup = cfg.sgd.setup();

    let mut per_seed_objective = Vec::new();
    let mut per_seed_grad_norm = Vec::new();
    for &seed in &cfg.seeds {
        let mut run = cfg.sgd.clone();
        run.seed = seed;
        run.iterations = k_max;
        run.snapshots = grid.clone();
        let traj = run_sgd(&run)?;
        let model = run.build_model()?;
        let mut objective = Vec::with_capacity(grid.len());
        let mut grad = Vec::with_capacity(grid.len());
        for (_, h) in &traj.snapshots {
            let ex = estimate_expectation(
                h,
                run.parameterization,
                &model,
                &setup,
                cfg.estimator_samples,
                cfg.estimator_sampler,
            )?;
            objective.push(ex.objective.mean_value);
            grad.push(ex.gradient.norm_of_mean);
        }
        per_seed_objective.push(objective);
        per_seed_grad_norm.push(grad);
    }
    let runs = cfg.seeds.len() as f64;
    let avg = |rows: &[Vec<f64>], j: usize| rows.iter().map(|r| r[j]).sum::<f64>() / runs;
    let expected_objective: Vec<f64> = (0..grid.len())
        .map(|j| avg(&per_seed_objective, j))
        .collect();
    let per_seed_cost_gap: Vec<Vec<f64>> = per_seed_objective
        .iter()
        .map(|r| r.iter().map(|v| v - j_star).collect())
        .collect();
    Ok(RatesData {
        cost_gap: expected_objective.iter().map(|v| v - j_star).collect(),
        grad_norm: (0..grid.len())
            .map(|j| avg(&per_seed_grad_norm, j))
            .collect(),
        k: grid,
        expected_objective,
        per_seed_cost_gap,
        per_seed_grad_norm,
        j_star,
        j_star_source,
    })
}
