//! Closed forms for a circular hole inside a circular exterior boundary.

mod circles;
mod lambert;
mod two_point;

pub use circles::{
    annulus_state, energy_circles, energy_circles_derivative, free_radius, outer_flux,
};
pub use lambert::lambert_w;
pub use two_point::{
    crossing_check, expected_energy_two_point, golden_section, two_point_minimizer, CrossingReport,
    TwoPointRadiusLaw, DEFAULT_DELTA, GOLDEN_TOL,
};
