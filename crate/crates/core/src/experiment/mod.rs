//! Convergence-rate campaigns, log-log regression and CSV output.

mod fit;
pub mod output;
mod rates;

pub use fit::{fit_loglog, LogLogFit, MIN_FIT_POINTS};
pub use rates::{
    oracle_j_star, resolve_j_star, run_rates_campaign, saa_minimize, JStarSource, RateFits,
    RatesConfig, RatesData, SaaMinimum, DEFAULT_K_GRID,
};
