//! Bernoulli's exterior free boundary problem with a random interior boundary.
//!
//! The deterministic exterior boundary is found by minimizing the expected
//! Dirichlet energy
//!
//! ```text
//! J(Γ, Σ) = ∫_Σ ∂u/∂n ds + λ² |D|
//! ```
//!
//! over starlike or convex curves Γ, where `u` is harmonic in the annular
//! domain `D` between the random inner curve Σ and Γ with `u = 1` on Σ and
//! `u = 0` on Γ. The crate is organised bottom-up:
//!
//! - [`geometry`]: truncated Fourier curves (radial and support-function
//!   form), discretized boundaries, the admissible-set projection and the
//!   annulus transport diagnostics.
//! - [`solver`]: a Nyström boundary integral solver for the Dirichlet
//!   problem on the annulus, returning Neumann traces and the energy.
//! - [`calculus`]: shape gradient density, coefficient gradients, the
//!   H^{1/2} preconditioner, the shape Hessian quadratic form and
//!   finite-difference checkers.
//! - [`oracle`]: closed-form results for concentric circles (Lambert W,
//!   free radius, two-point random radius).
//! - [`stochastic`]: the random boundary model, Monte Carlo and Halton
//!   samplers, the projected stochastic gradient recursion and estimators.
//! - [`experiment`]: convergence-rate campaigns and CSV output helpers.
//!
//! The guide in `book/` walks through each layer; its code listings are
//! compiled and run as doc-tests of this crate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod oracle;
pub mod solver;
pub mod stochastic;

pub use error::{Error, Result};

/// Chapters of the guide, compiled as doc-tests so the listings cannot rot.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}
    #[doc = include_str!("../../../book/src/solver.md")]
    pub mod solver {}
    #[doc = include_str!("../../../book/src/shape-calculus.md")]
    pub mod shape_calculus {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/stochastic-gradient.md")]
    pub mod stochastic_gradient {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub mod experiments {}
}
