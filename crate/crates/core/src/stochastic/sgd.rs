use serde::{Deserialize, Serialize};

use super::model::{sample_interior, RandomBoundaryModel, SamplerKind};
use crate::calculus::{evaluate, ShapeSetup};
use crate::geometry::{
    project_admissible, AdmissibleSet, Parameterization, RadialCurve, TrigSeries,
};
use crate::solver::DEFAULT_GAP_MIN;
use crate::{Error, Result};

pub const DEFAULT_MAX_RETRIES: u32 = 5;

/// Step sizes `t_n = θ/(n + offset)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub theta: f64,
    pub offset: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            theta: 1.0 / 400.0,
            offset: 0.0,
        }
    }
}

impl Schedule {
    pub fn new(theta: f64, offset: f64) -> Result<Self> {
        let s = Self { theta, offset };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta_step",
                value: self.theta,
            });
        }
        if !(self.offset > -1.0 && self.offset.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "offset",
                value: self.offset,
            });
        }
        Ok(())
    }

    pub fn step(&self, n: u64) -> f64 {
        self.theta / (n as f64 + self.offset)
    }

    /// Every schedule of this family with `θ > 0` has `Σ t_n = ∞` and `Σ t_n² < ∞`.
    pub fn is_robbins_monro(&self) -> bool {
        self.theta > 0.0 && self.validate().is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub n: u64,
    /// Accepted step size, after any halving.
    pub step: f64,
    pub j_sample: f64,
    /// H^{1/2} norm of the sample's preconditioned gradient.
    pub grad_norm: f64,
    pub retries: u32,
    pub projected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgdState {
    pub h: TrigSeries,
    /// Index of the next iteration, starting at 1.
    pub n: u64,
    pub schedule: Schedule,
    /// Sample index used by the next iteration.
    pub rng_cursor: u64,
    pub history: Vec<HistoryEntry>,
}

impl SgdState {
    pub fn new(h: TrigSeries, schedule: Schedule) -> Self {
        Self {
            h,
            n: 1,
            schedule,
            rng_cursor: 0,
            history: Vec::new(),
        }
    }
}

/// Everything a step needs besides the state and the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepContext {
    pub kind: Parameterization,
    pub setup: ShapeSetup,
    pub set: AdmissibleSet,
    pub sampler: SamplerKind,
    pub max_retries: u32,
}

fn rejectable(e: &Error) -> bool {
    matches!(
        e,
        Error::GapTooSmall { .. }
            | Error::NotEnclosed { .. }
            | Error::NonpositiveRadius { .. }
            | Error::NotConvex { .. }
            | Error::DegenerateBoundary { .. }
    )
}

/// One projected stochastic gradient step `h ← π(h − t_n G(h, ξ_n))`.
///
/// A candidate whose domain with the current sample degenerates is rejected
/// and retried with half the step, at most `max_retries` times.
pub fn sgd_step(
    mut state: SgdState,
    model: &RandomBoundaryModel,
    ctx: &StepContext,
) -> Result<SgdState> {
    let sigma = sample_interior(model, state.rng_cursor, ctx.sampler)?;
    let eval =
        evaluate(&state.h, ctx.kind, &sigma, &ctx.setup).map_err(|e| Error::StepRejected {
            n: state.n,
            retries: 0,
            reason: format!("gradient at current iterate: {e}"),
        })?;
    let g = TrigSeries::new(eval.gradient.preconditioned.clone())?;
    let mut t = state.schedule.step(state.n);
    let mut retries = 0;
    let (next, projected) = loop {
        let candidate = state.h.axpy(-t, &g)?;
        let projected = project_admissible(&candidate, &ctx.set, ctx.kind)?;
        match ctx.setup.domain(&projected, ctx.kind, &sigma) {
            Ok(_) => {
                let moved = projected.coeffs() != candidate.coeffs();
                break (projected, moved);
            }
            Err(e) if rejectable(&e) && retries < ctx.max_retries => {
                retries += 1;
                t *= 0.5;
            }
            Err(e) => {
                return Err(Error::StepRejected {
                    n: state.n,
                    retries,
                    reason: e.to_string(),
                })
            }
        }
    };
    state.history.push(HistoryEntry {
        n: state.n,
        step: t,
        j_sample: eval.energy,
        grad_norm: eval.gradient.norm(),
        retries,
        projected,
    });
    state.h = next;
    state.n += 1;
    state.rng_cursor += 1;
    Ok(state)
}

/// Mean shape of the random inner boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum MeanShape {
    Ellipse { a: f64, b: f64 },
    Circle { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub mean: MeanShape,
    /// Scale `A` of the half-widths `A/(1+l)²`.
    pub amplitude: f64,
    /// Half-width `0.5` on every coefficient instead of the decaying law.
    pub flat_amplitudes: bool,
    /// Defaults to a tenth of the smallest mean radius and the largest
    /// reachable radius.
    pub radial_bounds: Option<(f64, f64)>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            mean: MeanShape::Ellipse { a: 0.4, b: 0.2 },
            amplitude: 0.05,
            flat_amplitudes: false,
            radial_bounds: None,
        }
    }
}

impl ModelConfig {
    pub fn deterministic_circle(radius: f64) -> Self {
        Self {
            mean: MeanShape::Circle { radius },
            amplitude: 0.0,
            flat_amplitudes: false,
            radial_bounds: None,
        }
    }

    pub fn build(&self, order: usize, seed: u64) -> Result<RandomBoundaryModel> {
        let mean = match self.mean {
            MeanShape::Ellipse { a, b } => RadialCurve::ellipse(a, b, order)?,
            MeanShape::Circle { radius } => RadialCurve::circle(radius, order)?,
        };
        let amplitudes = if self.flat_amplitudes {
            vec![0.5; 2 * order + 1]
        } else {
            RandomBoundaryModel::decaying_amplitudes(order, self.amplitude)
        };
        let bounds = self.radial_bounds.unwrap_or_else(|| {
            let (lo, hi) = mean.radial_range();
            (0.1 * lo, hi + amplitudes.iter().sum::<f64>() + 1e-12)
        });
        RandomBoundaryModel::new(mean, amplitudes, bounds, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SgdConfig {
    pub order: usize,
    pub lambda: f64,
    pub iterations: u64,
    pub seed: u64,
    pub schedule: Schedule,
    pub model: ModelConfig,
    pub parameterization: Parameterization,
    pub sampler: SamplerKind,
    pub initial_radius: f64,
    pub admissible: AdmissibleSet,
    pub nodes: Option<usize>,
    pub gap_min: f64,
    pub max_retries: u32,
    /// Iterations after which the iterate is recorded, besides the last one.
    pub snapshots: Vec<u64>,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            order: 8,
            lambda: 7.0,
            iterations: 1000,
            seed: 1,
            schedule: Schedule::default(),
            model: ModelConfig::default(),
            parameterization: Parameterization::Radial,
            sampler: SamplerKind::Mc,
            initial_radius: 0.75,
            admissible: AdmissibleSet::default(),
            nodes: None,
            gap_min: DEFAULT_GAP_MIN,
            max_retries: DEFAULT_MAX_RETRIES,
            snapshots: vec![10, 20, 1000],
        }
    }
}

impl SgdConfig {
    pub fn setup(&self) -> ShapeSetup {
        ShapeSetup {
            lambda: self.lambda,
            nodes: self.nodes,
            gap_min: self.gap_min,
        }
    }

    pub fn step_context(&self) -> StepContext {
        StepContext {
            kind: self.parameterization,
            setup: self.setup(),
            set: self.admissible,
            sampler: self.sampler,
            max_retries: self.max_retries,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("lambda", self.lambda),
            ("initial_radius", self.initial_radius),
            ("gap_min", self.gap_min),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if self.order == 0 {
            return Err(Error::InvalidParameter {
                name: "order",
                value: 0.0,
            });
        }
        self.schedule.validate()?;
        self.admissible.validate()
    }

    pub fn build_model(&self) -> Result<RandomBoundaryModel> {
        self.model.build(self.order, self.seed)
    }

    pub fn initial_iterate(&self) -> Result<TrigSeries> {
        project_admissible(
            &TrigSeries::constant(self.initial_radius, self.order),
            &self.admissible,
            self.parameterization,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial: TrigSeries,
    /// `(n, h_n)` for each requested snapshot reached, in increasing `n`.
    pub snapshots: Vec<(u64, TrigSeries)>,
    pub history: Vec<HistoryEntry>,
    pub final_iterate: TrigSeries,
}

impl Trajectory {
    pub fn iterations(&self) -> u64 {
        self.history.len() as u64
    }

    pub fn projection_activity(&self) -> f64 {
        if self.history.is_empty() {
            return 0.0;
        }
        self.history.iter().filter(|e| e.projected).count() as f64 / self.history.len() as f64
    }
}

pub fn run_sgd(cfg: &SgdConfig) -> Result<Trajectory> {
    run_sgd_with(cfg, |_, _| {})
}

/// Runs `cfg.iterations` steps, calling `observe` after each accepted step.
pub fn run_sgd_with<F: FnMut(&HistoryEntry, &TrigSeries)>(
    cfg: &SgdConfig,
    mut observe: F,
) -> Result<Trajectory> {
    cfg.validate()?;
    let model = cfg.build_model()?;
    let ctx = cfg.step_context();
    let initial = cfg.initial_iterate()?;
    let mut state = SgdState::new(initial.clone(), cfg.schedule);
    let mut snapshots = Vec::new();
    for _ in 0..cfg.iterations {
        state = sgd_step(state, &model, &ctx)?;
        let done = state.n - 1;
        if let Some(entry) = state.history.last() {
            observe(entry, &state.h);
        }
        if cfg.snapshots.contains(&done) {
            snapshots.push((done, state.h.clone()));
        }
    }
    Ok(Trajectory {
        initial,
        snapshots,
        history: state.history,
        final_iterate: state.h,
    })
}
