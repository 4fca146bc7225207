use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::domain::AnnularDomain;
use super::quadrature::log_weights;
use crate::geometry::{DiscreteBoundary, Point};
use crate::{Error, Result};

const PIVOT_RATIO_MIN: f64 = 1e-13;

/// Traces of the harmonic function with prescribed Dirichlet data.
///
/// `neumann_inner` and `neumann_outer` are `∂u/∂n` with `n` the unit normal
/// exterior to the annulus: on Σ it points into the hole, on Γ away from it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySolution {
    pub neumann_inner: Vec<f64>,
    pub neumann_outer: Vec<f64>,
    /// `∫_Σ ∂u/∂n ds`.
    pub energy_flux_term: f64,
    /// `|D|`.
    pub area: f64,
    pub density_inner: Vec<f64>,
    pub density_outer: Vec<f64>,
    pub constant: f64,
}

impl BoundarySolution {
    /// `∫_Σ ∂u/∂n ds + ∫_Γ ∂u/∂n ds`, zero for a harmonic function.
    pub fn total_flux(&self, domain: &AnnularDomain) -> f64 {
        domain.inner().integrate(&self.neumann_inner)
            + domain.outer().integrate(&self.neumann_outer)
    }

    /// `u(x)` for `x` inside the annulus, away from its boundary.
    pub fn evaluate(&self, domain: &AnnularDomain, x: Point) -> f64 {
        let mut acc = self.constant;
        for (b, phi) in [
            (domain.inner(), &self.density_inner),
            (domain.outer(), &self.density_outer),
        ] {
            for ((y, w), p) in b.nodes.iter().zip(b.arc_weights()).zip(phi.iter()) {
                let r2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
                acc -= 0.5 * r2.ln() / TAU * w * p;
            }
        }
        acc
    }
}

/// LU-factored boundary integral system for one annulus, reusable for any data.
///
/// `u` is represented as a single-layer potential with density `φ` on both
/// curves plus a constant `c`, subject to zero total charge. Same-curve
/// entries use the periodic logarithmic product rule, cross-curve entries
/// the trapezoid rule. Neumann traces follow from the jump relation
/// `∂u/∂n = ½φ + K'φ` with the adjoint double-layer operator `K'`.
pub struct DirichletSolver {
    domain: AnnularDomain,
    lu: LU<f64, Dyn, Dyn>,
    /// Rows: collocation points on Σ then Γ; columns: densities on Σ then Γ.
    adjoint: DMatrix<f64>,
}

fn sign_for(inner: bool) -> f64 {
    if inner {
        -1.0
    } else {
        1.0
    }
}

impl DirichletSolver {
    pub fn new(domain: AnnularDomain) -> Result<Self> {
        let (mi, mo) = (domain.inner().len(), domain.outer().len());
        let n = mi + mo;
        let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
        let mut adjoint = DMatrix::<f64>::zeros(n, n);
        let blocks = [(domain.inner(), 0usize, true), (domain.outer(), mi, false)];
        for &(bi, oi, inner_i) in &blocks {
            let ni = bi.len();
            let rw = log_weights(ni);
            let h = TAU / ni as f64;
            let s_n = sign_for(inner_i);
            for &(bj, oj, _) in &blocks {
                let wj = bj.arc_weights();
                let same = std::ptr::eq(bi, bj);
                for i in 0..ni {
                    let x = bi.nodes[i];
                    let nx = [s_n * bi.normals[i][0], s_n * bi.normals[i][1]];
                    for j in 0..bj.len() {
                        let y = bj.nodes[j];
                        let d = [x[0] - y[0], x[1] - y[1]];
                        let r2 = d[0] * d[0] + d[1] * d[1];
                        let (single, dbl) = if same {
                            if i == j {
                                let speed = bi.speed[i];
                                let l = speed.ln() * h;
                                let kappa = s_n * bi.curvature[i];
                                (-(0.5 * rw[0] + l) * speed / TAU, -0.5 * kappa * wj[j] / TAU)
                            } else {
                                let sn = ((bi.thetas[i] - bi.thetas[j]) * 0.5).sin();
                                let l = 0.5 * (r2 / (4.0 * sn * sn)).ln() * h;
                                (
                                    -(0.5 * rw[(i + ni - j) % ni] + l) * bj.speed[j] / TAU,
                                    -(d[0] * nx[0] + d[1] * nx[1]) / r2 * wj[j] / TAU,
                                )
                            }
                        } else {
                            (
                                -0.5 * r2.ln() * wj[j] / TAU,
                                -(d[0] * nx[0] + d[1] * nx[1]) / r2 * wj[j] / TAU,
                            )
                        };
                        a[(oi + i, oj + j)] = single;
                        adjoint[(oi + i, oj + j)] = dbl;
                    }
                    a[(oi + i, n)] = 1.0;
                }
            }
            for (j, w) in bi.arc_weights().into_iter().enumerate() {
                a[(n, oi + j)] = w;
            }
        }
        let lu = a.lu();
        let u = lu.u();
        let diag = u.diagonal().map(f64::abs);
        let pivot_ratio = diag.min() / diag.max();
        if !(pivot_ratio > PIVOT_RATIO_MIN) {
            return Err(Error::SingularSystem { pivot_ratio });
        }
        Ok(Self {
            domain,
            lu,
            adjoint,
        })
    }

    pub fn domain(&self) -> &AnnularDomain {
        &self.domain
    }

    pub fn solve(&self, g_inner: &[f64], g_outer: &[f64]) -> Result<BoundarySolution> {
        let (mi, mo) = (self.domain.inner().len(), self.domain.outer().len());
        if g_inner.len() != mi {
            return Err(Error::DimensionMismatch {
                expected: mi,
                got: g_inner.len(),
            });
        }
        if g_outer.len() != mo {
            return Err(Error::DimensionMismatch {
                expected: mo,
                got: g_outer.len(),
            });
        }
        let n = mi + mo;
        let mut rhs = DVector::<f64>::zeros(n + 1);
        rhs.as_mut_slice()[..mi].copy_from_slice(g_inner);
        rhs.as_mut_slice()[mi..n].copy_from_slice(g_outer);
        let sol = self
            .lu
            .solve(&rhs)
            .ok_or(Error::SingularSystem { pivot_ratio: 0.0 })?;
        let phi = sol.rows(0, n).into_owned();
        let kphi = &self.adjoint * &phi;
        let trace: Vec<f64> = (0..n).map(|i| 0.5 * phi[i] + kphi[i]).collect();
        let neumann_inner = trace[..mi].to_vec();
        let neumann_outer = trace[mi..].to_vec();
        let energy_flux_term = self.domain.inner().integrate(&neumann_inner);
        Ok(BoundarySolution {
            neumann_inner,
            neumann_outer,
            energy_flux_term,
            area: self.domain.area(),
            density_inner: phi.as_slice()[..mi].to_vec(),
            density_outer: phi.as_slice()[mi..].to_vec(),
            constant: sol[n],
        })
    }

    /// State with `u = 1` on Σ and `u = 0` on Γ.
    pub fn solve_state(&self) -> Result<BoundarySolution> {
        let ones = vec![1.0; self.domain.inner().len()];
        let zeros = vec![0.0; self.domain.outer().len()];
        self.solve(&ones, &zeros)
    }
}

pub fn solve_dirichlet(
    domain: &AnnularDomain,
    g_inner: &[f64],
    g_outer: &[f64],
) -> Result<BoundarySolution> {
    DirichletSolver::new(domain.clone())?.solve(g_inner, g_outer)
}

/// `J = ∫_Σ ∂u/∂n ds + λ²|D|` for the state.
pub fn dirichlet_energy(domain: &AnnularDomain, lambda: f64) -> Result<f64> {
    let s = DirichletSolver::new(domain.clone())?.solve_state()?;
    Ok(energy_from_state(&s, lambda))
}

pub fn energy_from_state(state: &BoundarySolution, lambda: f64) -> f64 {
    state.energy_flux_term + lambda * lambda * state.area
}

/// Nodal values of `f` on a boundary, convenient for building Dirichlet data.
pub fn sample_on(b: &DiscreteBoundary, f: impl Fn(Point) -> f64) -> Vec<f64> {
    b.nodes.iter().map(|&p| f(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Parameterization, RadialCurve, TrigSeries};
    use crate::oracle::{annulus_state, energy_circles, outer_flux};
    use crate::solver::DEFAULT_GAP_MIN;

    fn annulus(rs: f64, rg: f64, m: usize) -> AnnularDomain {
        AnnularDomain::from_curves(
            &RadialCurve::circle(rs, 0).unwrap(),
            &TrigSeries::constant(rg, 0),
            Parameterization::Radial,
            m,
            DEFAULT_GAP_MIN,
        )
        .unwrap()
    }

    #[test]
    fn concentric_state_matches_closed_form() {
        let d = annulus(0.5, 1.0, 128);
        let s = DirichletSolver::new(d.clone())
            .unwrap()
            .solve_state()
            .unwrap();
        let flux = outer_flux(1.0, 0.5).unwrap();
        for v in &s.neumann_outer {
            assert!((v + flux).abs() < 1e-8, "{v}");
        }
        let inner_flux = 1.0 / (0.5 * 2f64.ln());
        for v in &s.neumann_inner {
            assert!((v - inner_flux).abs() < 1e-8, "{v}");
        }
        let u = s.evaluate(&d, [0.75, 0.0]);
        assert!((u - annulus_state(0.75, 1.0, 0.5).unwrap()).abs() < 1e-8);
        let j = energy_from_state(&s, 1.0);
        assert!((j - energy_circles(1.0, 0.5, 1.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn zero_data_gives_zero() {
        let d = annulus(0.5, 1.0, 64);
        let s = solve_dirichlet(&d, &[0.0; 64], &[0.0; 64]).unwrap();
        assert!(s
            .neumann_inner
            .iter()
            .chain(&s.neumann_outer)
            .all(|v| v.abs() < 1e-15));
        assert_eq!(s.energy_flux_term, 0.0);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn off_center_harmonic_function_is_reproduced() {
        // u = log|x − z| + 0.3 x − 0.2 y with z inside the hole; its exact
        // normal derivatives are available in closed form.
        let sigma = RadialCurve::from_coeffs(vec![0.4, 0.05, 0.08, 0.0, 0.03]).unwrap();
        let gamma = TrigSeries::new(vec![1.1, 0.0, 0.1, 0.07, 0.0]).unwrap();
        let z = [0.05, -0.03];
        let u = |p: Point| {
            0.5 * ((p[0] - z[0]).powi(2) + (p[1] - z[1]).powi(2)).ln() + 0.3 * p[0] - 0.2 * p[1]
        };
        let grad = |p: Point| {
            let r2 = (p[0] - z[0]).powi(2) + (p[1] - z[1]).powi(2);
            [(p[0] - z[0]) / r2 + 0.3, (p[1] - z[1]) / r2 - 0.2]
        };
        let mut errs = vec![];
        for m in [32, 64, 128] {
            let d = AnnularDomain::from_curves(&sigma, &gamma, Parameterization::Radial, m, 0.02)
                .unwrap();
            let s =
                solve_dirichlet(&d, &sample_on(d.inner(), u), &sample_on(d.outer(), u)).unwrap();
            let mut err: f64 = 0.0;
            for (b, tr, sgn) in [
                (d.inner(), &s.neumann_inner, -1.0),
                (d.outer(), &s.neumann_outer, 1.0),
            ] {
                for i in 0..b.len() {
                    let g = grad(b.nodes[i]);
                    let exact = sgn * (g[0] * b.normals[i][0] + g[1] * b.normals[i][1]);
                    err = err.max((tr[i] - exact).abs());
                }
            }
            assert!(s.total_flux(&d).abs() < 1e-8 || m < 64);
            errs.push(err);
        }
        assert!(errs[2] < 1e-9, "{errs:?}");
        assert!(errs[1] < errs[0] / 100.0, "{errs:?}");
    }
}
