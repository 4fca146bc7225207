use serde::{Deserialize, Serialize};

use super::gradient::{
    gradient_radial, gradient_support, CoefficientGradient, ShapeGradientDensity,
};
use crate::geometry::{Parameterization, RadialCurve, SupportFunction, TrigSeries};
use crate::solver::{
    default_node_count, energy_from_state, AnnularDomain, BoundarySolution, DirichletSolver,
    DEFAULT_GAP_MIN,
};
use crate::Result;

/// Physical and discretization parameters shared by all shape evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSetup {
    pub lambda: f64,
    /// Nodes per boundary; `None` picks `max(128, 8(2N+1))`.
    pub nodes: Option<usize>,
    pub gap_min: f64,
}

impl Default for ShapeSetup {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            nodes: None,
            gap_min: DEFAULT_GAP_MIN,
        }
    }
}

impl ShapeSetup {
    pub fn with_lambda(lambda: f64) -> Self {
        Self {
            lambda,
            ..Self::default()
        }
    }

    pub fn node_count(&self, order: usize) -> usize {
        self.nodes.unwrap_or_else(|| default_node_count(order))
    }

    pub fn domain(
        &self,
        outer: &TrigSeries,
        kind: Parameterization,
        sigma: &RadialCurve,
    ) -> Result<AnnularDomain> {
        let m = self.node_count(outer.order().max(sigma.order()));
        AnnularDomain::from_curves(sigma, outer, kind, m, self.gap_min)
    }
}

/// Energy, density, gradient and state for one (Γ, Σ) pair.
#[derive(Debug, Clone)]
pub struct ShapeEvaluation {
    pub energy: f64,
    pub density: ShapeGradientDensity,
    pub gradient: CoefficientGradient,
    pub state: BoundarySolution,
}

pub fn energy(
    outer: &TrigSeries,
    kind: Parameterization,
    sigma: &RadialCurve,
    setup: &ShapeSetup,
) -> Result<f64> {
    let domain = setup.domain(outer, kind, sigma)?;
    let state = DirichletSolver::new(domain)?.solve_state()?;
    Ok(energy_from_state(&state, setup.lambda))
}

pub fn evaluate(
    outer: &TrigSeries,
    kind: Parameterization,
    sigma: &RadialCurve,
    setup: &ShapeSetup,
) -> Result<ShapeEvaluation> {
    let domain = setup.domain(outer, kind, sigma)?;
    let state = DirichletSolver::new(domain.clone())?.solve_state()?;
    let density = ShapeGradientDensity::from_state(&domain, &state, setup.lambda);
    let gradient = match kind {
        Parameterization::Radial => gradient_radial(&density, &RadialCurve::new(outer.clone())?)?,
        Parameterization::Support => {
            gradient_support(&density, &SupportFunction::new(outer.clone())?)?
        }
    };
    Ok(ShapeEvaluation {
        energy: energy_from_state(&state, setup.lambda),
        density,
        gradient,
        state,
    })
}
