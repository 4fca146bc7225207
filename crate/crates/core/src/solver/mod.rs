//! Dirichlet problem for the Laplacian on an annular domain.

mod dirichlet;
mod domain;
mod quadrature;

pub use dirichlet::{
    dirichlet_energy, energy_from_state, sample_on, solve_dirichlet, BoundarySolution,
    DirichletSolver,
};
pub use domain::{default_node_count, AnnularDomain, DEFAULT_GAP_MIN};
pub use quadrature::log_weights;
