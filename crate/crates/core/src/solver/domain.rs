use crate::geometry::{
    discretize_radial, outer_boundary, DiscreteBoundary, Parameterization, RadialCurve, TrigSeries,
};
use crate::{Error, Result};

pub const DEFAULT_GAP_MIN: f64 = 0.02;

/// Node count used on each boundary for truncation order `N`: `max(128, 8(2N+1))`.
pub fn default_node_count(order: usize) -> usize {
    let m = (8 * (2 * order + 1)).max(128);
    m + m % 2
}

/// The region between an inner curve Σ and an outer curve Γ.
///
/// Both boundaries keep their own counterclockwise parameterization with
/// normals pointing away from the region each one encloses. The normal
/// exterior to the annulus is therefore the stored normal on Γ and its
/// negative on Σ.
#[derive(Debug, Clone)]
pub struct AnnularDomain {
    inner: DiscreteBoundary,
    outer: DiscreteBoundary,
    gap: f64,
}

impl AnnularDomain {
    /// Checks that every inner node lies inside the outer polygon and that the
    /// node-to-node distance between the curves is at least `gap_min`.
    pub fn new(inner: DiscreteBoundary, outer: DiscreteBoundary, gap_min: f64) -> Result<Self> {
        for (b, m) in [(&inner, inner.len()), (&outer, outer.len())] {
            if m < 4 || m % 2 != 0 {
                return Err(Error::BadNodeCount(m));
            }
            if let Some((node, &speed)) = b.speed.iter().enumerate().find(|(_, s)| !(**s > 1e-12)) {
                return Err(Error::DegenerateBoundary { node, speed });
            }
        }
        if let Some(node) = inner.nodes.iter().position(|&p| !outer.contains(p)) {
            return Err(Error::NotEnclosed { node });
        }
        let gap = min_distance(&inner, &outer);
        if gap < gap_min {
            return Err(Error::GapTooSmall { gap, gap_min });
        }
        Ok(Self { inner, outer, gap })
    }

    /// Σ from a radial curve and Γ from coefficients in either parameterization.
    pub fn from_curves(
        sigma: &RadialCurve,
        outer: &TrigSeries,
        kind: Parameterization,
        m: usize,
        gap_min: f64,
    ) -> Result<Self> {
        let inner = discretize_radial(sigma, m)?;
        let outer = outer_boundary(outer, kind, m)?;
        Self::new(inner, outer, gap_min)
    }

    pub fn inner(&self) -> &DiscreteBoundary {
        &self.inner
    }

    pub fn outer(&self) -> &DiscreteBoundary {
        &self.outer
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// `|D| = ½∮_{∂D} x·n ds`.
    pub fn area(&self) -> f64 {
        self.outer.enclosed_area() - self.inner.enclosed_area()
    }
}

fn min_distance(a: &DiscreteBoundary, b: &DiscreteBoundary) -> f64 {
    let mut best = f64::INFINITY;
    for p in &a.nodes {
        for q in &b.nodes {
            let d = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
            best = best.min(d);
        }
    }
    best.sqrt()
}
