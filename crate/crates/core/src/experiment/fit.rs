use serde::Serialize;

use crate::{Error, Result};

pub const MIN_FIT_POINTS: usize = 4;

/// Least-squares line `log₁₀ y = slope · log₁₀ x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Fits the pairs with `x > 0` and finite `y > 0`; needs at least four of them.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> Result<LogLogFit> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && b.is_finite())
        .map(|(a, b)| (a.log10(), b.log10()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::TooFewPoints { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    Ok(LogLogFit {
        slope,
        intercept: my - slope * mx,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x = [100.0, 200.0, 500.0, 1000.0, 1e4];
        let y: Vec<f64> = x.iter().map(|k: &f64| 3.0 * k.powf(-0.5)).collect();
        let fit = fit_loglog(&x, &y).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let err = fit_loglog(&[100.0, 200.0, 300.0], &[1.0, 0.5, 0.3]).unwrap_err();
        assert!(matches!(err, Error::TooFewPoints { needed: 4, got: 3 }));
        let err = fit_loglog(&[1.0, 2.0, 3.0, 4.0], &[1.0, -1.0, 0.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::TooFewPoints { got: 2, .. }));
    }
}
