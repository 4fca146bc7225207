use serde::{Deserialize, Serialize};

use super::curves::{
    convexity_violation, radial_convexity_violation, range_on_grid, Parameterization, TOL_CONVEX,
};
use super::fourier::{check_grid, mode_of_index, TrigSeries};
use crate::{Error, Result};

/// Relative slack under which a constraint counts as satisfied. Anything
/// within it is left untouched, which makes the projection idempotent.
const SLACK: f64 = 1e-12;
const BISECTION_STEPS: usize = 60;
const OUTER_ROUNDS: usize = 8;

/// Box and smoothness constraints on the exterior boundary coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    pub r_lower: f64,
    pub r_upper: f64,
    /// Bound on `sqrt(Σ_{l≥1} (1+l²)⁴ c_l²)`.
    pub coeff_norm_bound: f64,
    pub enforce_convexity: bool,
}

impl Default for AdmissibleSet {
    fn default() -> Self {
        Self {
            r_lower: 0.1,
            r_upper: 10.0,
            coeff_norm_bound: 1e3,
            enforce_convexity: false,
        }
    }
}

/// Weighted coefficient norm `sqrt(Σ_{l≥1} (1+l²)⁴ c_l²)`; the mean is excluded.
pub fn h4_seminorm(s: &TrigSeries) -> f64 {
    s.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let l = mode_of_index(i) as f64;
            (1.0 + l * l).powi(4) * c * c
        })
        .sum::<f64>()
        .sqrt()
}

impl AdmissibleSet {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_lower > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_lower",
                value: self.r_lower,
            });
        }
        if !(self.r_lower < self.r_upper) {
            return Err(Error::InfeasibleSet {
                r_lower: self.r_lower,
                r_upper: self.r_upper,
            });
        }
        if !(self.coeff_norm_bound > 0.0) {
            return Err(Error::InvalidParameter {
                name: "coeff_norm_bound",
                value: self.coeff_norm_bound,
            });
        }
        Ok(())
    }

    fn norm_ok(&self, s: &TrigSeries) -> bool {
        h4_seminorm(s) <= self.coeff_norm_bound * (1.0 + SLACK)
    }

    fn range_ok(&self, s: &TrigSeries) -> bool {
        let (lo, hi) = range_on_grid(s);
        lo >= self.r_lower * (1.0 - SLACK) && hi <= self.r_upper * (1.0 + SLACK)
    }

    fn convex_ok(&self, s: &TrigSeries, kind: Parameterization) -> bool {
        !self.enforce_convexity || convexity_defect(s, kind).is_none()
    }

    pub fn contains(&self, s: &TrigSeries, kind: Parameterization) -> bool {
        self.norm_ok(s) && self.range_ok(s) && self.convex_ok(s, kind)
    }
}

fn convexity_defect(s: &TrigSeries, kind: Parameterization) -> Option<(f64, f64)> {
    let grid = check_grid(s.order());
    match kind {
        Parameterization::Support => convexity_violation(s, &grid, TOL_CONVEX),
        Parameterization::Radial => radial_convexity_violation(s, &grid, TOL_CONVEX),
    }
}

fn shrink_from(s: &TrigSeries, first_mode: usize, factor: f64) -> TrigSeries {
    let mut out = s.clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        if mode_of_index(i) >= first_mode {
            *c *= factor;
        }
    }
    out
}

/// Restores feasibility of a coefficient vector with respect to `set`.
///
/// Feasible input is returned unchanged. Otherwise the oscillating modes are
/// rescaled to meet the norm bound, the mean is shifted into the radial box
/// (compressing the oscillation if the box is too narrow) and, when
/// convexity is enforced, the modes `l ≥ 2` are shrunk by bisection on a
/// common factor. Radial curves fall back to shrinking `l ≥ 1`.
pub fn project_admissible(
    s: &TrigSeries,
    set: &AdmissibleSet,
    kind: Parameterization,
) -> Result<TrigSeries> {
    set.validate()?;
    if s.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::Parse("non-finite coefficient".into()));
    }
    let mut out = s.clone();

    if !set.norm_ok(&out) {
        let factor = set.coeff_norm_bound / h4_seminorm(&out);
        out = shrink_from(&out, 1, factor);
    }

    for _ in 0..OUTER_ROUNDS {
        if !set.range_ok(&out) {
            out = fit_range(&out, set);
        }
        if !set.convex_ok(&out, kind) {
            out = restore_convexity(&out, kind);
        }
        if set.contains(&out, kind) {
            return Ok(out);
        }
    }
    Ok(out)
}

fn fit_range(s: &TrigSeries, set: &AdmissibleSet) -> TrigSeries {
    let (lo, hi) = range_on_grid(s);
    let mut out = s.clone();
    let width = set.r_upper - set.r_lower;
    if hi - lo > width {
        let factor = width * (1.0 - 1e-9) / (hi - lo);
        out = shrink_from(&out, 1, factor);
    }
    let (lo, hi) = range_on_grid(&out);
    let a0 = out.coeffs()[0];
    if hi > set.r_upper {
        out.coeffs_mut()[0] = set.r_upper - (hi - a0);
    } else if lo < set.r_lower {
        out.coeffs_mut()[0] = set.r_lower + (a0 - lo);
    }
    out
}

fn restore_convexity(s: &TrigSeries, kind: Parameterization) -> TrigSeries {
    let first = if convexity_defect(&shrink_from(s, 2, 0.0), kind).is_some() {
        1
    } else {
        2
    };
    let factor = convexity_shrink_factor(s, kind, first);
    shrink_from(s, first, factor)
}

/// Largest `t ∈ [0, 1]`, up to bisection resolution, such that damping the
/// modes `l ≥ first_mode` by `t` removes every convexity defect.
pub fn convexity_shrink_factor(s: &TrigSeries, kind: Parameterization, first_mode: usize) -> f64 {
    if convexity_defect(s, kind).is_none() {
        return 1.0;
    }
    let (mut good, mut bad) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (good + bad);
        if convexity_defect(&shrink_from(s, first_mode, mid), kind).is_none() {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roomy() -> AdmissibleSet {
        AdmissibleSet {
            r_lower: 0.05,
            r_upper: 5.0,
            coeff_norm_bound: 1e4,
            enforce_convexity: true,
        }
    }

    #[test]
    fn feasible_input_is_unchanged() {
        let s = TrigSeries::new(vec![1.0, 0.02, -0.03, 0.01, 0.0]).unwrap();
        for kind in [Parameterization::Radial, Parameterization::Support] {
            assert_eq!(project_admissible(&s, &roomy(), kind).unwrap(), s);
        }
    }

    #[test]
    fn constant_above_upper_bound_is_clamped() {
        let set = AdmissibleSet {
            r_lower: 0.5,
            r_upper: 2.0,
            ..roomy()
        };
        let s = TrigSeries::constant(2.1, 3);
        let p = project_admissible(&s, &set, Parameterization::Support).unwrap();
        assert_eq!(p, TrigSeries::constant(2.0, 3));
    }

    #[test]
    fn convexity_is_restored_by_bisection() {
        // h + h'' = 1 - 3 t 0.9 cos 2θ >= 0 requires t <= 1/2.7
        let s = TrigSeries::new(vec![1.0, 0.0, 0.0, 0.0, 0.9]).unwrap();
        let p = project_admissible(&s, &roomy(), Parameterization::Support).unwrap();
        let t = p.coeffs()[4] / 0.9;
        // oracle: independent bisection on the closed-form minimum 1 - 2.7 t
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if 1.0 - 2.7 * mid >= -TOL_CONVEX {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((t - lo).abs() < 1e-9, "{t} vs {lo}");
        assert_eq!(p.coeffs()[0], 1.0);
        let grid = check_grid(2);
        assert!(convexity_violation(&p, &grid, TOL_CONVEX).is_none());
    }

    #[test]
    fn projection_is_idempotent_on_hard_inputs() {
        let set = AdmissibleSet {
            r_lower: 0.6,
            r_upper: 1.5,
            coeff_norm_bound: 2.0,
            enforce_convexity: true,
        };
        let inputs = [
            vec![3.0, 0.4, -0.7, 0.3, 0.9],
            vec![0.1, 0.0, 0.0, 0.5, -0.5],
            vec![1.0, 0.0, 0.0, 0.0, 0.9],
        ];
        for c in inputs {
            for kind in [Parameterization::Radial, Parameterization::Support] {
                let s = TrigSeries::new(c.clone()).unwrap();
                let p = project_admissible(&s, &set, kind).unwrap();
                assert!(set.contains(&p, kind), "{c:?} {kind:?} -> {:?}", p.coeffs());
                assert_eq!(project_admissible(&p, &set, kind).unwrap(), p);
            }
        }
    }

    #[test]
    fn empty_set_is_reported() {
        let set = AdmissibleSet {
            r_lower: 2.0,
            r_upper: 1.0,
            ..roomy()
        };
        let s = TrigSeries::constant(1.0, 1);
        assert!(matches!(
            project_admissible(&s, &set, Parameterization::Radial),
            Err(Error::InfeasibleSet { .. })
        ));
    }
}
