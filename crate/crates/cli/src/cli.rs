use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "freebound",
    version,
    about = "Bernoulli free boundary under a random interior boundary",
    long_about = "Oracle reports, boundary integral solves, derivative checks, projected \
                  stochastic gradient runs and convergence-rate campaigns.\n\n\
                  Exit codes: 0 success, 1 tolerance failure or aborted run, 2 usage error."
)]
pub struct Cli {
    /// Directory receiving CSV and coefficient files.
    #[arg(
        long,
        global = true,
        env = "FREEBOUND_OUT_DIR",
        default_value = "freebound-out"
    )]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form results for concentric circles and the two-point radius law.
    Oracle(OracleArgs),
    /// Solves the state problem once and reports energy and traces.
    Solve(SolveArgs),
    /// Finite-difference checks of the shape gradient and second variation.
    Gradcheck(GradcheckArgs),
    /// Projected stochastic gradient run.
    Optimize(OptimizeArgs),
    /// Convergence-rate campaign and log-log slopes.
    Rates(RatesArgs),
    /// Empirical lower bound of the Hessian form in the H^{1/2} norm.
    Coercivity(CoercivityArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("case").required(true).multiple(true).args(["r_sigma", "two_point"])))]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Radius of a circular interior boundary.
    #[arg(long)]
    pub r_sigma: Option<f64>,
    /// Radii `r1 < r2` of the two-point law.
    #[arg(long, num_args = 2, value_names = ["R1", "R2"])]
    pub two_point: Option<Vec<f64>>,
    /// Probability of the radius `r1`.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Margin above `r2` of the constrained search interval.
    #[arg(long, default_value_t = freebound::oracle::DEFAULT_DELTA)]
    pub delta: f64,
    /// Points of the expected-energy scan.
    #[arg(long, default_value_t = 200)]
    pub scan_points: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Circular interior boundary of this radius.
    #[arg(long, conflicts_with = "sigma_file")]
    pub r_sigma: Option<f64>,
    /// Interior boundary coefficient file (radial form).
    #[arg(long)]
    pub sigma_file: Option<PathBuf>,
    /// Circular exterior boundary of this radius.
    #[arg(long, conflicts_with = "gamma_file")]
    pub r_gamma: Option<f64>,
    /// Exterior boundary coefficient file.
    #[arg(long)]
    pub gamma_file: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Nodes per boundary.
    #[arg(long)]
    pub nodes: Option<usize>,
}

/// Flags shared by the commands that run the stochastic gradient method.
#[derive(Debug, Args, Default)]
pub struct SgdFlags {
    /// TOML configuration, or an output file of an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Truncation order N.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Step scale θ in t_n = θ/(n + offset).
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub offset: Option<f64>,
    /// Scale A of the perturbation half-widths A/(1+l)².
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Half-width 0.5 on every perturbation coefficient.
    #[arg(long)]
    pub flat_amplitudes: bool,
    /// Circular interior boundary of this radius as the mean shape.
    #[arg(long)]
    pub r_sigma: Option<f64>,
    /// Zero perturbation amplitudes.
    #[arg(long)]
    pub deterministic: bool,
    /// `radial` or `support`.
    #[arg(long)]
    pub kind: Option<String>,
    /// `mc` or `qmc-halton`.
    #[arg(long)]
    pub sampler: Option<String>,
    #[arg(long)]
    pub initial_radius: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Nodes per boundary.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Modes l to check; every mode up to the order when omitted.
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<usize>>,
    /// `radial` or `support`.
    #[arg(long, default_value = "radial")]
    pub kind: String,
    #[arg(long, default_value_t = freebound::calculus::FD_GRADIENT_STEP)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub sgd: SgdFlags,
    /// Number of iterations.
    #[arg(long = "K")]
    pub iterations: Option<u64>,
    /// Iterations after which the iterate is written.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub sgd: SgdFlags,
    /// Iteration counts at which the estimators are evaluated.
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Estimator sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Length of the reference run for J*.
    #[arg(long)]
    pub reference_k: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CoercivityArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub order: Option<usize>,
}
