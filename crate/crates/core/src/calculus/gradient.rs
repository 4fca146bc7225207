use std::f64::consts::{PI, TAU};

use crate::geometry::{
    cos_index, equispaced, mode_of_index, sin_index, RadialCurve, SupportFunction, TrigSeries,
};
use crate::solver::{AnnularDomain, BoundarySolution, DirichletSolver};
use crate::{Error, Result};

/// `g = λ² − (∂u/∂n)²` at the nodes of Γ.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeGradientDensity {
    pub values: Vec<f64>,
    /// `speed · 2π/M`.
    pub arc_weights: Vec<f64>,
}

impl ShapeGradientDensity {
    pub fn from_state(domain: &AnnularDomain, state: &BoundarySolution, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        Self {
            values: state.neumann_outer.iter().map(|t| l2 - t * t).collect(),
            arc_weights: domain.outer().arc_weights(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫_Γ V_n g ds` for nodal `V_n`.
    pub fn pair(&self, vn: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(&self.arc_weights)
            .zip(vn)
            .map(|((g, w), v)| g * w * v)
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|g| g * factor).collect(),
            arc_weights: self.arc_weights.clone(),
        }
    }
}

/// Solves the state on `domain` and returns the density together with it.
pub fn shape_gradient_density(
    domain: &AnnularDomain,
    lambda: f64,
) -> Result<(ShapeGradientDensity, BoundarySolution)> {
    let state = DirichletSolver::new(domain.clone())?.solve_state()?;
    Ok((
        ShapeGradientDensity::from_state(domain, &state, lambda),
        state,
    ))
}

/// Gradient with respect to the coefficients, raw and H^{1/2}-preconditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientGradient {
    pub coeffs: Vec<f64>,
    pub preconditioned: Vec<f64>,
}

impl CoefficientGradient {
    pub fn from_raw(coeffs: Vec<f64>) -> Self {
        let preconditioned = precondition(&coeffs);
        Self {
            coeffs,
            preconditioned,
        }
    }

    /// H^{1/2} norm of the preconditioned direction: `sqrt(Σ (1+l²)^{1/2} d_l²)`.
    pub fn norm(&self) -> f64 {
        h_half_coeff_inner(&self.preconditioned, &self.preconditioned).sqrt()
    }
}

/// Weight `(1+l²)^{1/2}` of the coefficient at `index`.
#[inline]
pub fn h_half_weight(index: usize) -> f64 {
    let l = mode_of_index(index) as f64;
    (1.0 + l * l).sqrt()
}

/// Riesz map of the coefficient inner product `Σ (1+l²)^{1/2} p_l q_l`.
pub fn precondition(raw: &[f64]) -> Vec<f64> {
    raw.iter()
        .enumerate()
        .map(|(i, g)| g / h_half_weight(i))
        .collect()
}

pub fn h_half_coeff_inner(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .enumerate()
        .map(|(i, (a, b))| h_half_weight(i) * a * b)
        .sum()
}

/// `‖q‖²_{H^{1/2}} = 2π a0² + π Σ_{l≥1} (1+l²)^{1/2} (a_{-l}² + a_l²)`,
/// so that `‖cos θ‖² = π√2`.
pub fn h_half_norm_sq(q: &TrigSeries) -> f64 {
    q.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let base = if i == 0 { TAU } else { PI };
            base * h_half_weight(i) * c * c
        })
        .sum()
}

/// `(2π/M) Σ_i φ_k(θ_i) f_i` for every basis function `φ_k` of order `order`.
pub(crate) fn pair_with_basis(order: usize, f: &[f64]) -> Vec<f64> {
    let m = f.len();
    let h = TAU / m as f64;
    let thetas = equispaced(m);
    let mut out = vec![0.0; 2 * order + 1];
    out[0] = f.iter().sum::<f64>() * h;
    for l in 1..=order {
        let (mut s, mut c) = (0.0, 0.0);
        for (i, v) in f.iter().enumerate() {
            let (si, ci) = (l as f64 * thetas[i]).sin_cos();
            s += si * v;
            c += ci * v;
        }
        out[sin_index(l)] = s * h;
        out[cos_index(l)] = c * h;
    }
    out
}

/// `∫ φ_k γ g dθ` for a radial exterior boundary sampled at `density.len()` nodes.
pub fn gradient_radial(
    density: &ShapeGradientDensity,
    gamma: &RadialCurve,
) -> Result<CoefficientGradient> {
    let m = density.len();
    if m == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    let gv = gamma.eval_radial(&equispaced(m), 0);
    let f: Vec<f64> = gv.iter().zip(&density.values).map(|(r, g)| r * g).collect();
    Ok(CoefficientGradient::from_raw(pair_with_basis(
        gamma.order(),
        &f,
    )))
}

/// `∫ q_k g (h + h'') dθ` for a support-function exterior boundary.
pub fn gradient_support(
    density: &ShapeGradientDensity,
    h: &SupportFunction,
) -> Result<CoefficientGradient> {
    let m = density.len();
    if m == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    let f: Vec<f64> = equispaced(m)
        .into_iter()
        .zip(&density.values)
        .map(|(t, g)| g * h.curvature_radius(t).max(0.0))
        .collect();
    Ok(CoefficientGradient::from_raw(pair_with_basis(
        h.order(),
        &f,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(values: Vec<f64>) -> ShapeGradientDensity {
        let m = values.len();
        ShapeGradientDensity {
            values,
            arc_weights: vec![TAU / m as f64; m],
        }
    }

    #[test]
    fn zero_density_gives_zero_gradient() {
        let d = flat(vec![0.0; 32]);
        let g = gradient_radial(&d, &RadialCurve::circle(1.0, 3).unwrap()).unwrap();
        assert!(g.coeffs.iter().all(|&c| c == 0.0));
        let g = gradient_support(&d, &SupportFunction::disk(1.0, 3).unwrap()).unwrap();
        assert!(g.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn constant_density_on_circle_only_moves_the_mean() {
        let (r, c) = (0.8, -1.5);
        let d = flat(vec![c; 64]);
        for g in [
            gradient_radial(&d, &RadialCurve::circle(r, 4).unwrap()).unwrap(),
            gradient_support(&d, &SupportFunction::disk(r, 4).unwrap()).unwrap(),
        ] {
            assert!((g.coeffs[0] - TAU * r * c).abs() < 1e-13);
            assert!(g.coeffs[1..].iter().all(|v| v.abs() < 1e-13));
        }
    }

    #[test]
    fn gradient_is_linear_in_the_density() {
        let vals: Vec<f64> = (0..48).map(|i| (i as f64 * 0.37).sin()).collect();
        let h = SupportFunction::from_coeffs(vec![1.0, 0.05, 0.0, 0.0, 0.02]).unwrap();
        let d = flat(vals);
        let g1 = gradient_support(&d, &h).unwrap();
        let g2 = gradient_support(&d.scaled(2.0), &h).unwrap();
        for (a, b) in g1.coeffs.iter().zip(&g2.coeffs) {
            assert_eq!(2.0 * a, *b);
        }
        for (a, b) in g1.preconditioned.iter().zip(&g2.preconditioned) {
            assert_eq!(2.0 * a, *b);
        }
    }

    #[test]
    fn norm_of_cosine() {
        let q = TrigSeries::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!((h_half_norm_sq(&q) - PI * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn riesz_identity() {
        let raw = vec![0.3, -1.2, 0.7, 2.0, -0.4];
        let d = precondition(&raw);
        for q in [
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            vec![0.2, -0.3, 0.5, 0.9, 1.1],
        ] {
            let lhs = h_half_coeff_inner(&d, &q);
            let rhs: f64 = raw.iter().zip(&q).map(|(a, b)| a * b).sum();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
