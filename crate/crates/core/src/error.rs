use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient vector has length {0}; expected an odd length 2N+1")]
    BadCoefficientCount(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("radial function is not positive: r({theta:.6}) = {value:.3e}")]
    NonpositiveRadius { theta: f64, value: f64 },

    #[error("support function is not convex: (h+h'')({theta:.6}) = {value:.3e}")]
    NotConvex { theta: f64, value: f64 },

    #[error("degenerate boundary parameterization: speed {speed:.3e} at node {node}")]
    DegenerateBoundary { node: usize, speed: f64 },

    #[error("admissible set is empty: r_lower = {r_lower} > r_upper = {r_upper}")]
    InfeasibleSet { r_lower: f64, r_upper: f64 },

    #[error("radial ordering violated at r = {r:.6}, theta = {theta:.6}")]
    OrderingViolated { r: f64, theta: f64 },

    #[error("inner boundary is not enclosed by the outer boundary (node {node})")]
    NotEnclosed { node: usize },

    #[error("gap between boundaries {gap:.3e} is below the minimum {gap_min:.3e}")]
    GapTooSmall { gap: f64, gap_min: f64 },

    #[error("boundary integral system is numerically singular (pivot ratio {pivot_ratio:.3e})")]
    SingularSystem { pivot_ratio: f64 },

    #[error("node count {0} is invalid; need an even count of at least 4")]
    BadNodeCount(usize),

    #[error("annulus is degenerate: r_gamma = {r_gamma} must exceed r_sigma = {r_sigma}")]
    DegenerateAnnulus { r_gamma: f64, r_sigma: f64 },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("interior sample {index} violated the radial bounds {attempts} consecutive times")]
    ResampleLimitExceeded { index: u64, attempts: u32 },

    #[error("step {n} rejected after {retries} step-size halvings: {reason}")]
    StepRejected {
        n: u64,
        retries: u32,
        reason: String,
    },

    #[error("need at least {needed} usable points for a rate fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
