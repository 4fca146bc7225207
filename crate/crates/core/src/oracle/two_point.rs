use serde::{Deserialize, Serialize};

use super::circles::{check_annulus, energy_circles, free_radius};
use crate::{Error, Result};

pub const DEFAULT_DELTA: f64 = 0.05;
pub const GOLDEN_TOL: f64 = 1e-10;

/// Hole radius `r1` with probability `p`, otherwise `r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointRadiusLaw {
    pub r1: f64,
    pub r2: f64,
    pub p: f64,
}

impl TwoPointRadiusLaw {
    pub fn new(r1: f64, r2: f64, p: f64) -> Result<Self> {
        if !(r1 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r1",
                value: r1,
            });
        }
        if !(r2 > r1) {
            return Err(Error::InvalidParameter {
                name: "r2",
                value: r2,
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
            });
        }
        Ok(Self { r1, r2, p })
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self::new(self.r1, self.r2, p)
    }
}

/// `E[J] = p J(r_Γ, r1) + (1−p) J(r_Γ, r2)`; requires `r_Γ > r2`.
pub fn expected_energy_two_point(
    r_gamma: f64,
    law: &TwoPointRadiusLaw,
    lambda: f64,
) -> Result<f64> {
    check_annulus(r_gamma, law.r2)?;
    Ok(law.p * energy_circles(r_gamma, law.r1, lambda)?
        + (1.0 - law.p) * energy_circles(r_gamma, law.r2, lambda)?)
}

/// Minimizer of a unimodal function on `[a, b]` to absolute tolerance `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Minimizer of the expected energy over `r_Γ ≥ lower` (and `r_Γ > r2`).
///
/// For `p = 1` only the small hole occurs, so the minimizer is `F(r1)`
/// regardless of `lower`; this is the value that may cross the large hole.
pub fn two_point_minimizer(law: &TwoPointRadiusLaw, lambda: f64, lower: f64) -> Result<f64> {
    if law.p == 1.0 {
        return Ok(free_radius(law.r1, lambda));
    }
    let (f1, f2) = (free_radius(law.r1, lambda), free_radius(law.r2, lambda));
    let hi = f1.max(f2);
    let lo = f1.min(f2).max(law.r2).max(lower);
    if lo >= hi {
        return Ok(lo);
    }
    let eval = |r: f64| expected_energy_two_point(r, law, lambda).unwrap_or(f64::INFINITY);
    Ok(golden_section(eval, lo, hi, GOLDEN_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingReport {
    pub f_r1: f64,
    pub f_r2: f64,
    /// `F(r1) < r2`: the small-hole optimum would cut through the large hole.
    pub crossing: bool,
    pub delta: f64,
    /// Probabilities `p` for which the minimizer violates `r_Γ > r2 + δ`.
    pub violating_p: Option<(f64, f64)>,
    pub minimizer_at_p1: f64,
}

pub fn crossing_check(law: &TwoPointRadiusLaw, lambda: f64, delta: f64) -> Result<CrossingReport> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
        });
    }
    let (f_r1, f_r2) = (free_radius(law.r1, lambda), free_radius(law.r2, lambda));
    let limit = law.r2 + delta;
    let m = |p: f64| two_point_minimizer(&law.with_p(p)?, lambda, 0.0);
    let violating_p = if f_r1 > limit {
        None
    } else if m(0.0)? <= limit {
        Some((0.0, 1.0))
    } else {
        let (mut ok, mut bad) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (ok + bad);
            if m(mid)? <= limit {
                bad = mid;
            } else {
                ok = mid;
            }
        }
        Some((bad, 1.0))
    };
    Ok(CrossingReport {
        f_r1,
        f_r2,
        crossing: f_r1 < law.r2,
        delta,
        violating_p,
        minimizer_at_p1: f_r1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_probabilities_reduce_to_single_circle() {
        let law = TwoPointRadiusLaw::new(0.5, 0.8, 1.0).unwrap();
        let r = 1.4;
        assert_eq!(
            expected_energy_two_point(r, &law, 1.0).unwrap(),
            energy_circles(r, 0.5, 1.0).unwrap()
        );
        let law = law.with_p(0.0).unwrap();
        assert_eq!(
            expected_energy_two_point(r, &law, 1.0).unwrap(),
            energy_circles(r, 0.8, 1.0).unwrap()
        );
        assert!(matches!(
            expected_energy_two_point(0.8, &law, 1.0),
            Err(Error::DegenerateAnnulus { .. })
        ));
    }

    #[test]
    fn golden_matches_brute_force_in_crossing_regime() {
        let law = TwoPointRadiusLaw::new(0.5, 1.9, 0.5).unwrap();
        let g = two_point_minimizer(&law, 1.0, law.r2 + DEFAULT_DELTA).unwrap();
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        let mut r = law.r2 + DEFAULT_DELTA;
        while r < 4.0 {
            let v = expected_energy_two_point(r, &law, 1.0).unwrap();
            if v < best {
                best = v;
                arg = r;
            }
            r += 1e-6;
        }
        assert!((g - arg).abs() < 1e-5, "{g} vs {arg}");
    }

    #[test]
    fn strictly_convex_on_admissible_radii() {
        let law = TwoPointRadiusLaw::new(0.5, 1.9, 0.3).unwrap();
        let h = 1e-3;
        for k in 1..200 {
            let r = 1.9 + 0.01 * k as f64;
            let f = |x| expected_energy_two_point(x, &law, 1.0).unwrap();
            assert!(f(r + h) - 2.0 * f(r) + f(r - h) > 0.0);
        }
    }

    #[test]
    fn crossing_examples() {
        let safe = crossing_check(
            &TwoPointRadiusLaw::new(0.5, 0.6, 0.5).unwrap(),
            1.0,
            DEFAULT_DELTA,
        )
        .unwrap();
        assert!(!safe.crossing && safe.violating_p.is_none());

        let law = TwoPointRadiusLaw::new(0.5, 1.9, 0.5).unwrap();
        let rep = crossing_check(&law, 1.0, DEFAULT_DELTA).unwrap();
        assert!(rep.crossing);
        assert_eq!(rep.minimizer_at_p1, free_radius(0.5, 1.0));
        let (p_lo, p_hi) = rep.violating_p.unwrap();
        assert_eq!(p_hi, 1.0);
        assert!(p_lo > 0.0 && p_lo < 1.0);
        let just_below = two_point_minimizer(&law.with_p(p_lo - 1e-6).unwrap(), 1.0, 0.0).unwrap();
        let just_above = two_point_minimizer(&law.with_p(p_lo + 1e-6).unwrap(), 1.0, 0.0).unwrap();
        assert!(just_below > law.r2 + DEFAULT_DELTA - 1e-6);
        assert!(just_above < law.r2 + DEFAULT_DELTA + 1e-6);
    }
}
