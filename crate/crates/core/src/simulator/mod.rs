//! Finite-size Monte-Carlo counterpart of the theory curves.

mod fit;
mod trials;

pub use fit::{empirical_risk, fit_lasso, fit_ridge, FitResult};
pub use trials::{run_trial, run_trials, Penalty, TrialSummary};
