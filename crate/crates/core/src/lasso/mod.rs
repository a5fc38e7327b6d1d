//! Lasso (ℓ1) risk curves from the self-consistent `(τ, ρ̂, σ_ξ)` system.
//!
//! With `(s², r)` the effective noise and sparsity of the regime:
//!
//! ```text
//! 1 − ρ̂   = (1−r)·Erf(τ/√2) + r·Erf(a/√2)
//! σ_ξ²    = (1/α)·(s² + μα·σ_ξ²·[(1−r)·A(τ) + r·B(τ, σ_ξ)])
//! λ/α     = τ·σ_ξ·(1 − μρ̂)
//! GE₁     = α·σ_ξ² / (σ² + ρ)
//! TE₁     = (1 − μρ̂)²·GE₁
//! ```
//!
//! The solvers reduce the system to a scalar root in σ_ξ: for each trial
//! σ_ξ, τ is pinned by the third equation (or by the first with ρ̂ = 1/μ in
//! the interpolating limit), and the second equation decides the sign.

mod kernels;
mod phase;

pub use kernels::{a_arg, a_fun, b_fun, f1, f2, mixture, rho_hat};
pub use phase::{alpha_c, mu_c, mu_c_approx, mu_c_implicit, PhaseBoundary, RecoveryCurve};

use crate::error::{Error, Result};
use crate::model::{ModelConfig, RiskPoint};
use crate::numerics::{brent_root, Bracket};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    FiniteLambda,
    InterpMuBelow1,
    InterpMuAbove1,
    ZeroNoisePerfect,
    ZeroNoiseFailed,
}

/// Solution of the self-consistent system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfConsistentState {
    pub tau: f64,
    pub rho_hat: f64,
    pub sigma_xi: f64,
    pub branch: Branch,
}

impl SelfConsistentState {
    fn risk(&self, cfg: &ModelConfig) -> RiskPoint {
        let ge = cfg.alpha * self.sigma_xi * self.sigma_xi / cfg.signal_power();
        let c = 1.0 - cfg.mu * self.rho_hat;
        RiskPoint::new(c * c * ge, ge)
    }
}

const SIGMA_FLOOR: f64 = 1e-12;
const SIGMA_CEIL: f64 = 1e12;

fn check(cfg: &ModelConfig) -> Result<()> {
    cfg.validate()?;
    if !(cfg.signal_power() > 0.0) {
        return Err(Error::InvalidConfig("sigma and rho both zero".into()));
    }
    Ok(())
}

/// Largest root of `k` on (SIGMA_FLOOR, SIGMA_CEIL), where `k < 0` below the
/// root and `k > 0` above it. Scans down from the first positive point.
fn largest_sigma_root<K>(mut k: K, what: &str) -> Result<f64>
where
    K: FnMut(f64) -> Result<f64>,
{
    let mut hi = 1.0;
    let mut k_hi = k(hi)?;
    while !(k_hi > 0.0) {
        hi *= 2.0;
        if hi > SIGMA_CEIL {
            return Err(Error::NoConvergence(format!(
                "{what}: variance equation stays negative up to sigma_xi = {SIGMA_CEIL:e}"
            )));
        }
        k_hi = k(hi)?;
    }
    let mut lo = hi;
    loop {
        lo *= 0.5;
        if lo < SIGMA_FLOOR {
            return Err(Error::NoConvergence(format!(
                "{what}: variance equation stays positive down to sigma_xi = {SIGMA_FLOOR:e}"
            )));
        }
        if k(lo)? < 0.0 {
            break;
        }
        hi = lo;
    }
    let mut failure = None;
    let root = brent_root(
        |s| match k(s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        &Bracket::new(lo, hi),
    );
    match failure {
        Some(e) => Err(e),
        None => root.map_err(|e| Error::NoConvergence(format!("{what}: {e}"))),
    }
}

/// τ solving `τ·σ_ξ·(1 − μρ̂(τ, σ_ξ)) = λ/α` for fixed σ_ξ.
fn tau_finite(target: f64, sigma_xi: f64, mu: f64, r: f64) -> Result<f64> {
    let h = |t: f64| t * sigma_xi * (1.0 - mu * rho_hat(t, sigma_xi, r)) - target;
    let mut hi = 1.0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e15 {
            return Err(Error::NoConvergence(format!("no tau for sigma_xi = {sigma_xi}")));
        }
    }
    brent_root(h, &Bracket::new(0.0, hi))
}

/// τ solving `ρ̂(τ, σ_ξ) = 1/μ` for fixed σ_ξ (μ > 1).
fn tau_interp(sigma_xi: f64, mu: f64, r: f64) -> Result<f64> {
    let target = 1.0 / mu;
    let h = |t: f64| target - rho_hat(t, sigma_xi, r);
    let mut hi = 8.0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::NoConvergence(format!("no tau with rho_hat = 1/{mu}")));
        }
    }
    brent_root(h, &Bracket::new(0.0, hi))
}

/// Solves the system at λ > 0.
pub fn solve_l1_finite(cfg: &ModelConfig) -> Result<SelfConsistentState> {
    check(cfg)?;
    if !(cfg.lambda > 0.0) {
        return Err(Error::Domain("solve_l1_finite needs lambda > 0".into()));
    }
    let (s2, r) = cfg.effective_params();
    let (mu, alpha) = (cfg.mu, cfg.alpha);
    let target = cfg.lambda / alpha;
    let sigma_xi = largest_sigma_root(
        |s| {
            let t = tau_finite(target, s, mu, r)?;
            Ok(s * s * (1.0 - mu * mixture(t, s, r)) - s2 / alpha)
        },
        "finite lambda",
    )?;
    let tau = tau_finite(target, sigma_xi, mu, r)?;
    Ok(SelfConsistentState {
        tau,
        rho_hat: rho_hat(tau, sigma_xi, r),
        sigma_xi,
        branch: Branch::FiniteLambda,
    })
}

/// The interpolating limit λ → 0.
pub fn risk_l1_interp(cfg: &ModelConfig) -> Result<(RiskPoint, SelfConsistentState)> {
    check(cfg)?;
    if cfg.lambda != 0.0 {
        return Err(Error::Domain("risk_l1_interp needs lambda = 0".into()));
    }
    let (s2, r) = cfg.effective_params();
    let (mu, alpha) = (cfg.mu, cfg.alpha);
    if mu < 1.0 {
        // every estimate is nonzero and the fit is ordinary least squares
        let sigma_xi = (s2 / (alpha * (1.0 - mu))).sqrt();
        let branch = if s2 > 0.0 {
            Branch::InterpMuBelow1
        } else {
            Branch::ZeroNoisePerfect
        };
        let state = SelfConsistentState {
            tau: 0.0,
            rho_hat: 1.0,
            sigma_xi,
            branch,
        };
        let te = s2 * (1.0 - mu) / cfg.signal_power();
        let ge = s2 / ((1.0 - mu) * cfg.signal_power());
        return Ok((RiskPoint::new(te, ge), state));
    }
    if s2 == 0.0 {
        return zero_noise_branch(cfg);
    }
    if mu == 1.0 {
        let state = SelfConsistentState {
            tau: 0.0,
            rho_hat: 1.0,
            sigma_xi: f64::INFINITY,
            branch: Branch::InterpMuAbove1,
        };
        return Ok((RiskPoint::new(0.0, f64::INFINITY), state));
    }
    let sigma_xi = largest_sigma_root(
        |s| {
            let t = tau_interp(s, mu, r)?;
            Ok(s * s * (1.0 - mu * mixture(t, s, r)) - s2 / alpha)
        },
        "interpolating limit",
    )?;
    let state = SelfConsistentState {
        tau: tau_interp(sigma_xi, mu, r)?,
        rho_hat: 1.0 / mu,
        sigma_xi,
        branch: Branch::InterpMuAbove1,
    };
    Ok((state.risk(cfg), state))
}

/// Noiseless interpolation (σ = 0, λ → 0).
///
/// Below `μ = 1/α` the unobserved columns still act as noise and the
/// general branches apply. Above it the fit either recovers β exactly,
/// with `(τ, ρ̂)` from `ρ̂ = F₁(τ, r)` and `1/μ = F₂(τ, r)` at
/// `r = ρ/(μα)`, or fails with a finite σ_ξ once `1/μ < α_c(r)`.
pub fn zero_noise_branch(cfg: &ModelConfig) -> Result<(RiskPoint, SelfConsistentState)> {
    check(cfg)?;
    if cfg.sigma != 0.0 || cfg.lambda != 0.0 {
        return Err(Error::Domain("zero_noise_branch needs sigma = 0 and lambda = 0".into()));
    }
    let (s2, r) = cfg.effective_params();
    let mu = cfg.mu;
    if s2 > 0.0 || mu < 1.0 {
        return risk_l1_interp(cfg);
    }
    let perfect = |tau: f64, rho_hat: f64| {
        let state = SelfConsistentState {
            tau,
            rho_hat,
            sigma_xi: 0.0,
            branch: Branch::ZeroNoisePerfect,
        };
        Ok((RiskPoint::new(0.0, 0.0), state))
    };
    if r == 0.0 {
        let tau = brent_root(|t| a_fun(t) - 1.0 / mu, &Bracket::new(0.0, 40.0))?;
        return perfect(tau, f1(tau, 0.0));
    }
    if r < 1.0 {
        let boundary = alpha_c(r)?;
        if 1.0 / mu >= boundary.alpha_c {
            let tau = phase::f2_upper_root(1.0 / mu, r, &boundary)?;
            let rho_hat = f1(tau, r);
            if mu * rho_hat <= 1.0 + 1e-12 {
                return perfect(tau, rho_hat);
            }
        }
    }
    let sigma_xi = largest_sigma_root(
        |s| {
            let t = tau_interp(s, mu, r)?;
            Ok(1.0 - mu * mixture(t, s, r))
        },
        "noiseless interpolation",
    )?;
    let state = SelfConsistentState {
        tau: tau_interp(sigma_xi, mu, r)?,
        rho_hat: 1.0 / mu,
        sigma_xi,
        branch: Branch::ZeroNoiseFailed,
    };
    Ok((state.risk(cfg), state))
}

/// Dispatches on λ.
pub fn lasso_risk(cfg: &ModelConfig) -> Result<(RiskPoint, SelfConsistentState)> {
    if cfg.lambda > 0.0 {
        let state = solve_l1_finite(cfg)?;
        Ok((state.risk(cfg), state))
    } else {
        risk_l1_interp(cfg)
    }
}

/// Residuals of the three defining equations at `state`, in the order
/// (sparsity, variance, threshold). Exactly-solved limit branches report
/// the residual of the equation they impose instead.
pub fn residuals(cfg: &ModelConfig, state: &SelfConsistentState) -> [f64; 3] {
    let (s2, r) = cfg.effective_params();
    let (mu, alpha) = (cfg.mu, cfg.alpha);
    let (t, s) = (state.tau, state.sigma_xi);
    match state.branch {
        Branch::FiniteLambda | Branch::InterpMuAbove1 | Branch::InterpMuBelow1 | Branch::ZeroNoiseFailed => {
            if !s.is_finite() {
                return [0.0; 3];
            }
            let sparsity = rho_hat(t, s, r) - state.rho_hat;
            let variance = s * s - (s2 + mu * alpha * s * s * mixture(t, s, r)) / alpha;
            let threshold = t * s * (1.0 - mu * state.rho_hat) - cfg.lambda / alpha;
            [sparsity, variance, threshold]
        }
        Branch::ZeroNoisePerfect => {
            if mu < 1.0 {
                return [1.0 - state.rho_hat, s, 0.0];
            }
            [
                f1(t, r) - state.rho_hat,
                f2(t, r) - 1.0 / mu,
                (mu * state.rho_hat - 1.0).max(0.0),
            ]
        }
    }
}

#[cfg(test)]
mod tests;
