use super::fit::{empirical_risk, fit_lasso, fit_ridge};
use crate::error::{Error, Result};
use crate::model::{sample_trial_instance, ModelConfig, RiskPoint};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Penalty {
    L2,
    L1,
}

/// Monte-Carlo mean and standard error of TE and GE.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialSummary {
    pub cfg: ModelConfig,
    pub n: usize,
    /// Trials that produced a fit.
    pub trials: usize,
    pub failed: usize,
    pub te_mean: f64,
    /// Sample standard deviation over √trials; NaN for a single trial.
    pub te_stderr: f64,
    pub ge_mean: f64,
    pub ge_stderr: f64,
    pub penalty: Penalty,
}

/// Samples, fits and scores one trial.
pub fn run_trial(cfg: &ModelConfig, n: usize, penalty: Penalty, seed: u64, trial: u64) -> Result<RiskPoint> {
    let instance = sample_trial_instance(cfg, n, seed, trial)?;
    let fit = match penalty {
        Penalty::L2 => fit_ridge(&instance, cfg.lambda)?,
        Penalty::L1 => fit_lasso(&instance, cfg.lambda)?,
    };
    Ok(empirical_risk(&instance, &fit, cfg))
}

fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Runs `trials` independent draws. Trial `t` is keyed by `(seed, t)`, and
/// results are reduced in trial order, so the summary does not depend on
/// the thread count. Fails when more than 5% of the trials fail.
pub fn run_trials(cfg: &ModelConfig, n: usize, trials: usize, penalty: Penalty, seed: u64) -> Result<TrialSummary> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let outcomes: Vec<Result<RiskPoint>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, n, penalty, seed, t))
        .collect();
    let mut points = Vec::with_capacity(trials);
    let mut first_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(p) => points.push(p),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    let failed = trials - points.len();
    if failed * 20 > trials || points.is_empty() {
        return Err(Error::TrialFailures {
            failed,
            total: trials,
            first: first_error.map(|e| e.to_string()).unwrap_or_default(),
        });
    }
    let te: Vec<f64> = points.iter().map(|p| p.te).collect();
    let ge: Vec<f64> = points.iter().map(|p| p.ge).collect();
    let (te_mean, te_stderr) = mean_stderr(&te);
    let (ge_mean, ge_stderr) = mean_stderr(&ge);
    Ok(TrialSummary {
        cfg: *cfg,
        n,
        trials: points.len(),
        failed,
        te_mean,
        te_stderr,
        ge_mean,
        ge_stderr,
        penalty,
    })
}
