//! Starlike and convex curves from truncated Fourier series.

mod admissible;
mod boundary;
mod curves;
mod fourier;
mod io;
mod phi_map;

pub use admissible::{convexity_shrink_factor, h4_seminorm, project_admissible, AdmissibleSet};
pub use boundary::{
    discretize_radial, envelope, support_perturbation_field, DiscreteBoundary, Point,
};
pub use curves::{
    convexity_violation, radial_convexity_violation, translation_series, Parameterization,
    RadialCurve, SupportFunction, TOL_CONVEX,
};
pub use fourier::{check_grid, cos_index, equispaced, mode_of_index, sin_index, TrigSeries};
pub use io::{format_coefficients, parse_coefficients};
pub use phi_map::{
    phi_jacobian, phi_jacobian_diagnostics, triangular_singular_values, PhiMapDiagnostics,
};

/// Builds the exterior boundary from coefficients in either parameterization.
pub fn outer_boundary(
    series: &TrigSeries,
    kind: Parameterization,
    m: usize,
) -> crate::Result<DiscreteBoundary> {
    match kind {
        Parameterization::Radial => discretize_radial(&RadialCurve::new(series.clone())?, m),
        Parameterization::Support => envelope(&SupportFunction::new(series.clone())?, m),
    }
}
