use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::evaluate::ShapeSetup;
use super::gradient::h_half_norm_sq;
use crate::geometry::{
    equispaced, mode_of_index, project_admissible, AdmissibleSet, Parameterization, RadialCurve,
    TrigSeries,
};
use crate::solver::{AnnularDomain, BoundarySolution, DirichletSolver};
use crate::{Error, Result};

/// `I₁ + I₂` with
/// `I₁ = ∫_Γ (∂u'/∂n) u' + H λ² V_n² ds` and `I₂ = ∫_Γ (∂u/∂n)² V·∇_τ V_n ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianForm {
    pub value: f64,
    pub i1: f64,
    pub i2: f64,
}

/// Nodal deformation data on Γ for the perturbation `q` of the coefficients.
struct Deformation {
    vn: Vec<f64>,
    vt: Vec<f64>,
    dvn_ds: Vec<f64>,
    /// `V·∇_τ V_n` in the closed forms used for `I₂`.
    tangential: Vec<f64>,
}

fn deformation(
    outer: &TrigSeries,
    kind: Parameterization,
    q: &TrigSeries,
    m: usize,
) -> Deformation {
    let thetas = equispaced(m);
    let mut d = Deformation {
        vn: Vec::with_capacity(m),
        vt: Vec::with_capacity(m),
        dvn_ds: Vec::with_capacity(m),
        tangential: Vec::with_capacity(m),
    };
    for &t in &thetas {
        let (p, p1) = (q.eval(t), q.eval_derivative(t, 1));
        let (g, g1, g2) = (
            outer.eval(t),
            outer.eval_derivative(t, 1),
            outer.eval_derivative(t, 2),
        );
        match kind {
            Parameterization::Support => {
                let rho = g + g2;
                d.vn.push(p);
                d.vt.push(p1);
                d.dvn_ds.push(p1 / rho);
                d.tangential.push(p1 * p1 / (g * g + g1 * g1).sqrt());
            }
            Parameterization::Radial => {
                let s = (g * g + g1 * g1).sqrt();
                let s1 = (g * g1 + g1 * g2) / s;
                let vn = g * p / s;
                let vn1 = (g1 * p + g * p1) / s - g * p * s1 / (s * s);
                d.vn.push(vn);
                d.vt.push(g1 * p / s);
                d.dvn_ds.push(vn1 / s);
                d.tangential.push(g1 * p / (s * s) * vn1);
            }
        }
    }
    d
}

/// Solver, state and setup shared by repeated Hessian evaluations on one domain.
pub struct HessianContext {
    solver: DirichletSolver,
    state: BoundarySolution,
    outer: TrigSeries,
    kind: Parameterization,
    lambda: f64,
}

impl HessianContext {
    pub fn new(
        outer: &TrigSeries,
        kind: Parameterization,
        sigma: &RadialCurve,
        setup: &ShapeSetup,
    ) -> Result<Self> {
        let domain = setup.domain(outer, kind, sigma)?;
        Self::from_domain(domain, outer, kind, setup.lambda)
    }

    pub fn from_domain(
        domain: AnnularDomain,
        outer: &TrigSeries,
        kind: Parameterization,
        lambda: f64,
    ) -> Result<Self> {
        let solver = DirichletSolver::new(domain)?;
        let state = solver.solve_state()?;
        Ok(Self {
            solver,
            state,
            outer: outer.clone(),
            kind,
            lambda,
        })
    }

    pub fn state(&self) -> &BoundarySolution {
        &self.state
    }

    /// `(∫ (∂u'/∂n) u' ds, deformation)` for the derivative state with data
    /// `0` on Σ and `−(∂u/∂n) V_n` on Γ.
    fn derivative_state(&self, q: &TrigSeries) -> Result<(f64, Deformation)> {
        if q.order() != self.outer.order() {
            return Err(Error::DimensionMismatch {
                expected: self.outer.len(),
                got: q.len(),
            });
        }
        let outer = self.solver.domain().outer();
        let def = deformation(&self.outer, self.kind, q, outer.len());
        let un = &self.state.neumann_outer;
        let data: Vec<f64> = un.iter().zip(&def.vn).map(|(a, v)| -a * v).collect();
        let zeros = vec![0.0; self.solver.domain().inner().len()];
        let du = self.solver.solve(&zeros, &data)?;
        let w = outer.arc_weights();
        let dirichlet: f64 = (0..w.len())
            .map(|i| w[i] * du.neumann_outer[i] * data[i])
            .sum();
        Ok((dirichlet, def))
    }

    /// `I₁`, `I₂` and their sum.
    pub fn quadratic_form(&self, q: &TrigSeries) -> Result<HessianForm> {
        let (dirichlet, def) = self.derivative_state(q)?;
        let outer = self.solver.domain().outer();
        let w = outer.arc_weights();
        let un = &self.state.neumann_outer;
        let l2 = self.lambda * self.lambda;
        let mut curv = 0.0;
        let mut i2 = 0.0;
        for i in 0..w.len() {
            curv += w[i] * outer.curvature[i] * l2 * def.vn[i] * def.vn[i];
            i2 += w[i] * un[i] * un[i] * def.tangential[i];
        }
        let i1 = dirichlet + curv;
        Ok(HessianForm {
            value: i1 + i2,
            i1,
            i2,
        })
    }

    /// Second derivative of `ε ↦ J(Γ[outer + εq])`.
    ///
    /// ```text
    /// 2∫ (∂u'/∂n) u' + H (λ² + (∂u/∂n)²) V_n² + (λ² − (∂u/∂n)²)(H V_τ² − 2 V_τ ∂_s V_n) ds
    /// ```
    pub fn second_variation(&self, q: &TrigSeries) -> Result<f64> {
        let (dirichlet, def) = self.derivative_state(q)?;
        let outer = self.solver.domain().outer();
        let w = outer.arc_weights();
        let un = &self.state.neumann_outer;
        let l2 = self.lambda * self.lambda;
        let mut acc = 2.0 * dirichlet;
        for i in 0..w.len() {
            let (h, u2) = (outer.curvature[i], un[i] * un[i]);
            let (vn, vt) = (def.vn[i], def.vt[i]);
            acc += w[i]
                * (h * (l2 + u2) * vn * vn + (l2 - u2) * (h * vt * vt - 2.0 * vt * def.dvn_ds[i]));
        }
        Ok(acc)
    }
}

pub fn hessian_quadratic_form(
    outer: &TrigSeries,
    kind: Parameterization,
    sigma: &RadialCurve,
    q: &TrigSeries,
    setup: &ShapeSetup,
) -> Result<HessianForm> {
    HessianContext::new(outer, kind, sigma, setup)?.quadratic_form(q)
}

pub fn second_variation(
    outer: &TrigSeries,
    kind: Parameterization,
    sigma: &RadialCurve,
    q: &TrigSeries,
    setup: &ShapeSetup,
) -> Result<f64> {
    HessianContext::new(outer, kind, sigma, setup)?.second_variation(q)
}

/// `¼[Q(q₁+q₂) − Q(q₁−q₂)]` for the `I₁ + I₂` form.
pub fn polarization(ctx: &HessianContext, q1: &TrigSeries, q2: &TrigSeries) -> Result<f64> {
    let plus = ctx.quadratic_form(&q1.axpy(1.0, q2)?)?.value;
    let minus = ctx.quadratic_form(&q1.axpy(-1.0, q2)?)?.value;
    Ok(0.25 * (plus - minus))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoercivityConfig {
    pub order: usize,
    pub num_samples: usize,
    pub seed: u64,
    pub setup: ShapeSetup,
    /// Mean of the support function of Γ is drawn from this interval.
    pub h_mean: (f64, f64),
    /// Mean radius of Σ is drawn from this interval.
    pub sigma_mean: (f64, f64),
    /// Mode `l ≥ 1` amplitudes are uniform in `±amplitude/(1+l)²`.
    pub amplitude: f64,
}

impl Default for CoercivityConfig {
    fn default() -> Self {
        Self {
            order: 8,
            num_samples: 100,
            seed: 7,
            setup: ShapeSetup::default(),
            h_mean: (1.0, 1.3),
            sigma_mean: (0.35, 0.5),
            amplitude: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoercivitySample {
    pub ratio: f64,
    pub form: HessianForm,
    pub second_variation: f64,
    pub norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoercivityReport {
    /// `min Q(q)/‖q‖²_{H^{1/2}}` over all samples.
    pub c_e: f64,
    /// Minimum after each sample.
    pub running_min: Vec<f64>,
    pub samples: Vec<CoercivitySample>,
}

fn random_series<R: Rng>(rng: &mut R, order: usize, mean: f64, amplitude: f64) -> TrigSeries {
    let mut s = TrigSeries::constant(mean, order);
    for (i, c) in s.coeffs_mut().iter_mut().enumerate().skip(1) {
        let l = mode_of_index(i) as f64;
        *c = amplitude * rng.random_range(-1.0..1.0) / ((1.0 + l) * (1.0 + l));
    }
    s
}

/// Empirical lower bound of `Q(q)/‖q‖²_{H^{1/2}}` over random convex Γ
/// (support form), starlike Σ and perturbations `q`.
pub fn coercivity_probe(cfg: &CoercivityConfig) -> Result<CoercivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let convex = AdmissibleSet {
        r_lower: 0.05,
        r_upper: 100.0,
        coeff_norm_bound: 1e6,
        enforce_convexity: true,
    };
    let mut samples = Vec::with_capacity(cfg.num_samples);
    let mut running_min = Vec::with_capacity(cfg.num_samples);
    let mut best = f64::INFINITY;
    while samples.len() < cfg.num_samples {
        let hm = rng.random_range(cfg.h_mean.0..=cfg.h_mean.1);
        let sm = rng.random_range(cfg.sigma_mean.0..=cfg.sigma_mean.1);
        let h = project_admissible(
            &random_series(&mut rng, cfg.order, hm, cfg.amplitude),
            &convex,
            Parameterization::Support,
        )?;
        let sigma = RadialCurve::new(random_series(&mut rng, cfg.order, sm, cfg.amplitude))?;
        let q_mean = rng.random_range(-1.0..1.0);
        let q = random_series(&mut rng, cfg.order, q_mean, 1.0);
        let ctx = HessianContext::new(&h, Parameterization::Support, &sigma, &cfg.setup)?;
        let form = ctx.quadratic_form(&q)?;
        let norm_sq = h_half_norm_sq(&q);
        let ratio = form.value / norm_sq;
        best = best.min(ratio);
        running_min.push(best);
        samples.push(CoercivitySample {
            ratio,
            form,
            second_variation: ctx.second_variation(&q)?,
            norm_sq,
        });
    }
    Ok(CoercivityReport {
        c_e: best,
        running_min,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{cos_index, sin_index};

    const R: f64 = 1.0;
    const RS: f64 = 0.5;

    fn concentric(kind: Parameterization) -> HessianContext {
        let outer = TrigSeries::constant(R, 4);
        let sigma = RadialCurve::circle(RS, 4).unwrap();
        HessianContext::new(&outer, kind, &sigma, &ShapeSetup::default()).unwrap()
    }

    #[test]
    fn dilation_closed_forms() {
        let l = (R / RS).ln();
        let dirichlet = 2.0 * PI / (R * R * l.powi(3));
        let q = TrigSeries::constant(1.0, 4);
        for kind in [Parameterization::Radial, Parameterization::Support] {
            let ctx = concentric(kind);
            let form = ctx.quadratic_form(&q).unwrap();
            assert!((form.i1 - (dirichlet + 2.0 * PI)).abs() < 1e-8, "{form:?}");
            assert!(form.i2.abs() < 1e-12);
            // d²/dR² of 2π/log(R/r) + λ²π(R² − r²)
            let exact = 2.0 * PI / (R * R * l * l) + 4.0 * PI / (R * R * l.powi(3)) + 2.0 * PI;
            let sv = ctx.second_variation(&q).unwrap();
            assert!((sv - exact).abs() < 1e-8 * exact, "{sv} vs {exact}");
        }
    }

    #[test]
    fn translation_matches_eccentric_annulus() {
        // Capacity of the eccentric annulus: 2π / arccosh((a² + b² − d²)/(2ab)).
        let l = (R / RS).ln();
        let exact = 4.0 * PI / ((R * R - RS * RS) * l * l);
        let ctx = concentric(Parameterization::Support);
        for index in [sin_index(1), cos_index(1)] {
            let sv = ctx.second_variation(&TrigSeries::basis(4, index)).unwrap();
            assert!((sv - exact).abs() < 1e-8 * exact, "{sv} vs {exact}");
        }
    }

    #[test]
    fn polarization_is_symmetric_and_consistent() {
        let outer = TrigSeries::new(vec![1.1, 0.02, -0.03, 0.0, 0.05]).unwrap();
        let sigma = RadialCurve::ellipse(0.4, 0.3, 2).unwrap();
        let ctx = HessianContext::new(
            &outer,
            Parameterization::Support,
            &sigma,
            &ShapeSetup::default(),
        )
        .unwrap();
        let q1 = TrigSeries::new(vec![0.3, 1.0, 0.0, -0.5, 0.2]).unwrap();
        let q2 = TrigSeries::new(vec![-0.1, 0.0, 0.7, 0.1, 1.0]).unwrap();
        let b12 = polarization(&ctx, &q1, &q2).unwrap();
        let b21 = polarization(&ctx, &q2, &q1).unwrap();
        assert!((b12 - b21).abs() <= 1e-10 * b12.abs().max(1.0));
        let b11 = polarization(&ctx, &q1, &q1).unwrap();
        let q11 = ctx.quadratic_form(&q1).unwrap().value;
        assert!((b11 - q11).abs() <= 1e-10 * q11.abs());
    }

    #[test]
    fn support_form_terms_are_nonnegative() {
        let cfg = CoercivityConfig {
            num_samples: 6,
            ..CoercivityConfig::default()
        };
        let report = coercivity_probe(&cfg).unwrap();
        assert!(report.c_e > 0.0);
        assert!(report
            .samples
            .iter()
            .all(|s| s.form.i2 >= 0.0 && s.form.value > 0.0));
        assert!(report.running_min.windows(2).all(|w| w[1] <= w[0]));
    }
}
