use super::kernels::{f1, f2};
use crate::error::{Error, Result};
use crate::numerics::{brent_root, erf, mills_ratio, Bracket};
use std::f64::consts::{FRAC_2_PI, SQRT_2};

const TAU_LO: f64 = 1e-6;
const TAU_HI: f64 = 40.0;

/// Noiseless recovery boundary at sparsity ρ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseBoundary {
    pub rho: f64,
    /// Minimizer of `F₂(·, ρ)`.
    pub tau_c: f64,
    /// `F₁(τ_c, ρ) = min F₂(·, ρ)`.
    pub alpha_c: f64,
}

/// Largest overparametrization with exact noiseless recovery.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryCurve {
    pub rho_over_alpha: f64,
    pub mu_c: f64,
    pub tau_at_mc: f64,
}

/// Critical undersampling below which the noiseless ℓ1 fit cannot recover.
pub fn alpha_c(rho: f64) -> Result<PhaseBoundary> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("alpha_c needs 0 < rho < 1, got {rho}")));
    }
    let tau_c = brent_root(|t| f1(t, rho) - f2(t, rho), &Bracket::new(TAU_LO, TAU_HI)).map_err(|e| match e {
        Error::NoSignChange { .. } => Error::BracketFailure {
            rho,
            lo: TAU_LO,
            hi: TAU_HI,
        },
        other => other,
    })?;
    Ok(PhaseBoundary {
        rho,
        tau_c,
        alpha_c: f1(tau_c, rho),
    })
}

/// The root of `F₂(τ, r) = target` above the minimizer.
pub(crate) fn f2_upper_root(target: f64, r: f64, boundary: &PhaseBoundary) -> Result<f64> {
    let mut hi = boundary.tau_c.max(1.0);
    while f2(hi, r) < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoConvergence(format!("F2(tau, {r}) never reaches {target}")));
        }
    }
    brent_root(|t| f2(t, r) - target, &Bracket::new(boundary.tau_c, hi))
}

/// `1 − τ·R(τ)` where R is the Gaussian Mills ratio; decreasing from 1 to 0.
fn recovery_ratio(tau: f64) -> f64 {
    1.0 - tau * mills_ratio(tau)
}

/// μ_c from the parametric pair
/// `ρ/α = 1 − √(π/2)·τ·e^{τ²/2}·Erfc(τ/√2)` and
/// `μ_c = 1 + √(π/2)·τ·e^{τ²/2}·Erf(τ/√2)`.
pub fn mu_c(rho: f64, alpha: f64) -> Result<RecoveryCurve> {
    let boundary = alpha_c(rho)?;
    if !(alpha > boundary.alpha_c) {
        return Err(Error::NoWindow {
            rho,
            alpha,
            alpha_c: boundary.alpha_c,
        });
    }
    let ratio = rho / alpha;
    let tau = brent_root(|t| recovery_ratio(t) - ratio, &Bracket::new(1e-8, TAU_HI))?;
    let phi = FRAC_2_PI.sqrt() * (-0.5 * tau * tau).exp();
    Ok(RecoveryCurve {
        rho_over_alpha: ratio,
        mu_c: 1.0 + tau * erf(tau / SQRT_2) / phi,
        tau_at_mc: tau,
    })
}

/// μ_c as the root of `1/μ = α_c(ρ/(μα))`.
pub fn mu_c_implicit(rho: f64, alpha: f64) -> Result<f64> {
    let gap = |mu: f64| alpha_c(rho / (mu * alpha)).map(|b| 1.0 / mu - b.alpha_c);
    let lo = 1.0 / alpha;
    let g_lo = gap(lo)?;
    if g_lo <= 0.0 {
        return Err(Error::NoWindow {
            rho,
            alpha,
            alpha_c: 1.0 / lo - g_lo,
        });
    }
    let mut hi = 2.0 * lo;
    while gap(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoConvergence("mu_c beyond 1e300".into()));
        }
    }
    let mut failure = None;
    let root = brent_root(
        |mu| match gap(mu) {
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
        None => root,
    }
}

/// Small-ρ approximation `√(πα/(2ρ))·e^{α/(2ρ)}`.
pub fn mu_c_approx(rho: f64, alpha: f64) -> f64 {
    let x = alpha / (2.0 * rho);
    (std::f64::consts::PI * x).sqrt() * x.exp()
}
