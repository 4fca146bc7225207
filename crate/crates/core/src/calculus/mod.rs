//! Shape gradient, H^{1/2} preconditioning and the shape Hessian.

mod evaluate;
mod fd;
mod gradient;
mod hessian;

pub use evaluate::{energy, evaluate, ShapeEvaluation, ShapeSetup};
pub use fd::{
    fd_gradient_check, fd_hessian_check, relative_error, FdEntry, FdHessianEntry, FD_GRADIENT_STEP,
    FD_HESSIAN_STEP,
};
pub use gradient::{
    gradient_radial, gradient_support, h_half_coeff_inner, h_half_norm_sq, h_half_weight,
    precondition, shape_gradient_density, CoefficientGradient, ShapeGradientDensity,
};
pub use hessian::{
    coercivity_probe, hessian_quadratic_form, polarization, second_variation, CoercivityConfig,
    CoercivityReport, CoercivitySample, HessianContext, HessianForm,
};
