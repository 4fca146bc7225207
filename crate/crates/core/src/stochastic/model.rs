use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::halton::Halton;
use crate::geometry::{check_grid, mode_of_index, RadialCurve, TrigSeries};
use crate::oracle::TwoPointRadiusLaw;
use crate::{Error, Result};

/// Consecutive rejections tolerated before a model is declared misconfigured.
pub const RESAMPLE_LIMIT: u32 = 100;
/// Halton index stride between resample attempts.
const HALTON_ATTEMPT_STRIDE: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    /// Pseudo-random uniforms from a ChaCha stream per sample index.
    Mc,
    /// Unscrambled Halton points, index `i` maps to Halton index `i + 1`.
    QmcHalton,
}

impl SamplerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SamplerKind::Mc => "mc",
            SamplerKind::QmcHalton => "qmc-halton",
        }
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mc" => Ok(SamplerKind::Mc),
            "qmc-halton" | "halton" | "qmc" => Ok(SamplerKind::QmcHalton),
            other => Err(Error::Parse(format!("unknown sampler `{other}`"))),
        }
    }
}

/// Random inner curve `r_Σ = r̄_Σ + Σ_k a_k (2U_k − 1) φ_k` with independent
/// uniforms `U_k`, rejected unless it stays within the radial bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomBoundaryModel {
    mean_curve: RadialCurve,
    amplitudes: Vec<f64>,
    radial_bounds: (f64, f64),
    seed: u64,
    /// Replaces the mean-shift law by a two-point law on the radius offset.
    two_point_mean: Option<TwoPointOffset>,
}

/// Mean offset `low` with probability `p`, otherwise `high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointOffset {
    pub low: f64,
    pub high: f64,
    pub p: f64,
}

impl RandomBoundaryModel {
    pub fn new(
        mean_curve: RadialCurve,
        amplitudes: Vec<f64>,
        radial_bounds: (f64, f64),
        seed: u64,
    ) -> Result<Self> {
        if amplitudes.len() != mean_curve.series().len() {
            return Err(Error::DimensionMismatch {
                expected: mean_curve.series().len(),
                got: amplitudes.len(),
            });
        }
        if let Some(&a) = amplitudes.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "amplitude",
                value: a,
            });
        }
        if !(radial_bounds.0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_sigma_lower",
                value: radial_bounds.0,
            });
        }
        if !(radial_bounds.1 > radial_bounds.0) {
            return Err(Error::InvalidParameter {
                name: "r_sigma_upper",
                value: radial_bounds.1,
            });
        }
        Ok(Self {
            mean_curve,
            amplitudes,
            radial_bounds,
            seed,
            two_point_mean: None,
        })
    }

    /// Half-widths `A/(1+l)²` for every coefficient of mode `l`.
    pub fn decaying_amplitudes(order: usize, scale: f64) -> Vec<f64> {
        (0..2 * order + 1)
            .map(|i| {
                let l = mode_of_index(i) as f64;
                scale / ((1.0 + l) * (1.0 + l))
            })
            .collect()
    }

    pub fn deterministic(mean_curve: RadialCurve) -> Result<Self> {
        let n = mean_curve.series().len();
        let (lo, hi) = mean_curve.radial_range();
        Self::new(mean_curve, vec![0.0; n], (0.5 * lo, 2.0 * hi), 0)
    }

    /// Concentric two-point model: Σ is the circle of radius `r1` with
    /// probability `p` and of radius `r2` otherwise.
    pub fn two_point(law: &TwoPointRadiusLaw, order: usize) -> Result<Self> {
        let mean = RadialCurve::circle(law.r1, order)?;
        let mut m = Self::new(
            mean,
            vec![0.0; 2 * order + 1],
            (0.5 * law.r1.min(law.r2), 2.0 * law.r1.max(law.r2)),
            0,
        )?;
        m.two_point_mean = Some(TwoPointOffset {
            low: 0.0,
            high: law.r2 - law.r1,
            p: law.p,
        });
        Ok(m)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn mean_curve(&self) -> &RadialCurve {
        &self.mean_curve
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn radial_bounds(&self) -> (f64, f64) {
        self.radial_bounds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn order(&self) -> usize {
        self.mean_curve.order()
    }

    pub fn two_point_mean(&self) -> Option<TwoPointOffset> {
        self.two_point_mean
    }

    pub fn is_deterministic(&self) -> bool {
        self.two_point_mean.is_none() && self.amplitudes.iter().all(|&a| a == 0.0)
    }

    /// Pointwise variance `Σ_k a_k² φ_k(θ)² / 3` of the radius.
    pub fn radius_variance(&self, theta: f64) -> f64 {
        let order = self.order();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let phi = TrigSeries::basis(order, k).eval(theta);
                a * a * phi * phi / 3.0
            })
            .sum()
    }

    /// Curve for the uniforms `u ∈ [0,1]^{2N+1}`, before the bounds check.
    pub fn curve_from_uniforms(&self, u: &[f64]) -> Result<TrigSeries> {
        if u.len() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                got: u.len(),
            });
        }
        let mut s = self.mean_curve.series().clone();
        for ((c, a), x) in s.coeffs_mut().iter_mut().zip(&self.amplitudes).zip(u) {
            if *a != 0.0 {
                *c += a * (2.0 * x - 1.0);
            }
        }
        if let Some(tp) = self.two_point_mean {
            s.coeffs_mut()[0] += if u[0] < tp.p { tp.low } else { tp.high };
        }
        Ok(s)
    }

    fn within_bounds(&self, s: &TrigSeries) -> bool {
        check_grid(s.order()).iter().all(|&t| {
            let r = s.eval(t);
            r >= self.radial_bounds.0 && r <= self.radial_bounds.1
        })
    }

    /// The `index`-th sample of the sequence selected by `kind`.
    pub fn sample(&self, index: u64, kind: SamplerKind) -> Result<RadialCurve> {
        sample_interior(self, index, kind)
    }
}

/// Draws sample `index` of the model; depends only on the model seed,
/// `index` and `kind`.
pub fn sample_interior(
    model: &RandomBoundaryModel,
    index: u64,
    kind: SamplerKind,
) -> Result<RadialCurve> {
    if model.is_deterministic() {
        return Ok(model.mean_curve.clone());
    }
    let dim = model.amplitudes.len();
    let mut rng = None;
    let halton = (kind == SamplerKind::QmcHalton).then(|| Halton::new(dim));
    for attempt in 0..RESAMPLE_LIMIT {
        let u: Vec<f64> = match &halton {
            Some(h) => h.point(index + 1 + attempt as u64 * HALTON_ATTEMPT_STRIDE),
            None => {
                let r = rng.get_or_insert_with(|| {
                    let mut r = ChaCha8Rng::seed_from_u64(model.seed);
                    r.set_stream(index);
                    r
                });
                (0..dim).map(|_| r.random::<f64>()).collect()
            }
        };
        let s = model.curve_from_uniforms(&u)?;
        if model.within_bounds(&s) {
            return RadialCurve::new(s);
        }
    }
    Err(Error::ResampleLimitExceeded {
        index,
        attempts: RESAMPLE_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse_model(scale: f64) -> RandomBoundaryModel {
        let mean = RadialCurve::ellipse(0.4, 0.2, 8).unwrap();
        RandomBoundaryModel::new(
            mean,
            RandomBoundaryModel::decaying_amplitudes(8, scale),
            (0.05, 0.6),
            11,
        )
        .unwrap()
    }

    #[test]
    fn zero_amplitudes_return_the_mean() {
        let mean = RadialCurve::ellipse(0.4, 0.2, 8).unwrap();
        let m = RandomBoundaryModel::new(mean.clone(), vec![0.0; 17], (0.05, 0.6), 3).unwrap();
        for kind in [SamplerKind::Mc, SamplerKind::QmcHalton] {
            assert_eq!(sample_interior(&m, 17, kind).unwrap(), mean);
        }
    }

    #[test]
    fn samples_are_reproducible_and_index_dependent() {
        let m = ellipse_model(0.05);
        for kind in [SamplerKind::Mc, SamplerKind::QmcHalton] {
            let a = sample_interior(&m, 5, kind).unwrap();
            let b = sample_interior(&m, 5, kind).unwrap();
            let c = sample_interior(&m, 6, kind).unwrap();
            assert_eq!(a.series().coeffs(), b.series().coeffs());
            assert_ne!(a.series().coeffs(), c.series().coeffs());
        }
        let other = ellipse_model(0.05).with_seed(12);
        assert_ne!(
            sample_interior(&m, 5, SamplerKind::Mc).unwrap(),
            sample_interior(&other, 5, SamplerKind::Mc).unwrap()
        );
    }

    #[test]
    fn samples_respect_bounds() {
        let m = ellipse_model(0.05);
        for i in 0..200 {
            let (lo, hi) = sample_interior(&m, i, SamplerKind::Mc)
                .unwrap()
                .radial_range();
            assert!(lo >= 0.05 && hi <= 0.6);
        }
    }

    #[test]
    fn literal_half_unit_amplitudes_exhaust_resampling() {
        let mean = RadialCurve::ellipse(0.4, 0.2, 8).unwrap();
        let m = RandomBoundaryModel::new(mean, vec![0.5; 17], (0.01, 0.9), 1).unwrap();
        let err = sample_interior(&m, 0, SamplerKind::Mc).unwrap_err();
        assert!(matches!(
            err,
            Error::ResampleLimitExceeded { attempts: 100, .. }
        ));
    }

    #[test]
    fn sample_mean_radius_within_monte_carlo_band() {
        let m = ellipse_model(0.05);
        let n = 10_000;
        for theta in [0.0, 0.7, 2.0] {
            let mean: f64 = (0..n)
                .map(|i| sample_interior(&m, i, SamplerKind::Mc).unwrap().eval(theta))
                .sum::<f64>()
                / n as f64;
            let band = 3.0 * (m.radius_variance(theta) / n as f64).sqrt();
            let target = m.mean_curve().eval(theta);
            assert!(
                (mean - target).abs() <= band,
                "θ={theta}: {mean} vs {target} ± {band}"
            );
        }
    }

    #[test]
    fn two_point_offsets_follow_the_law() {
        let law = TwoPointRadiusLaw::new(0.3, 0.5, 0.25).unwrap();
        let m = RandomBoundaryModel::two_point(&law, 4).unwrap();
        let n = 4000;
        let low = (0..n)
            .filter(|&i| {
                let r = sample_interior(&m, i, SamplerKind::QmcHalton)
                    .unwrap()
                    .eval(0.0);
                (r - 0.3).abs() < 1e-15
            })
            .count();
        assert!((low as f64 / n as f64 - 0.25).abs() < 1e-3);
    }
}
