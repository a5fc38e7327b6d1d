use crate::error::{Error, Result};
use crate::numerics::{erf, erfc, mills_ratio};
use std::f64::consts::{FRAC_2_PI, SQRT_2};

fn gauss_weight(x: f64) -> f64 {
    FRAC_2_PI.sqrt() * (-0.5 * x * x).exp()
}

/// `A(τ) = (1+τ²)·Erfc(τ/√2) − √(2/π)·τ·e^{−τ²/2}`.
pub fn a_fun(tau: f64) -> f64 {
    // written through the Mills ratio so large τ degrades gracefully
    gauss_weight(tau) * ((1.0 + tau * tau) * mills_ratio(tau) - tau)
}

/// `√(2/π)·a·e^{−a²/2} + (a² − 1)·Erf(a/√2)`, the braced term of `B`.
fn b_brace(a: f64) -> f64 {
    if a.abs() < 0.1 {
        // Maclaurin series; the closed form cancels to O(a³)
        let a2 = a * a;
        let coeffs = [
            2.0 / 3.0,
            -1.0 / 15.0,
            1.0 / 140.0,
            -1.0 / 1512.0,
            1.0 / 19008.0,
            -1.0 / 274560.0,
        ];
        let mut sum = 0.0;
        for c in coeffs.iter().rev() {
            sum = sum * a2 + c;
        }
        return FRAC_2_PI.sqrt() * a * a2 * sum;
    }
    gauss_weight(a) * a + (a * a - 1.0) * erf(a / SQRT_2)
}

/// `a = τσ_ξ/√(1+σ_ξ²)`.
pub fn a_arg(tau: f64, sigma_xi: f64) -> f64 {
    tau * sigma_xi / (1.0 + sigma_xi * sigma_xi).sqrt()
}

/// `B(τ, σ_ξ) = 1 + τ² − C₀·{…} − 2·Erf(a/√2)` with `C₀ = 1 + 1/σ_ξ²`.
pub fn b_fun(tau: f64, sigma_xi: f64) -> Result<f64> {
    if !(sigma_xi > 0.0) {
        return Err(Error::Domain(format!("B needs sigma_xi > 0, got {sigma_xi}")));
    }
    Ok(b_unchecked(tau, sigma_xi))
}

pub(crate) fn b_unchecked(tau: f64, sigma_xi: f64) -> f64 {
    if sigma_xi.is_infinite() {
        return a_fun(tau);
    }
    let a = a_arg(tau, sigma_xi);
    let inv = 1.0 / (sigma_xi * sigma_xi);
    let c0 = 1.0 + inv;
    if a <= 1.0 {
        return 1.0 + tau * tau - c0 * b_brace(a) - 2.0 * erf(a / SQRT_2);
    }
    // same expression regrouped around Erfc; avoids cancelling 1 − Erf for large a
    inv + gauss_weight(a) * ((tau * tau + 2.0 - c0) * mills_ratio(a) - c0 * a)
}

/// `F₁(τ, ρ) = 1 − (1−ρ)·Erf(τ/√2)`.
pub fn f1(tau: f64, rho: f64) -> f64 {
    rho + (1.0 - rho) * erfc(tau / SQRT_2)
}

/// `F₂(τ, ρ) = (1−ρ)·A(τ) + ρ·(1+τ²)`.
pub fn f2(tau: f64, rho: f64) -> f64 {
    (1.0 - rho) * a_fun(tau) + rho * (1.0 + tau * tau)
}

/// Fraction of nonzero estimates at `(τ, σ_ξ)` for sparsity `r`.
pub fn rho_hat(tau: f64, sigma_xi: f64, r: f64) -> f64 {
    let a = if sigma_xi.is_infinite() {
        tau
    } else {
        a_arg(tau, sigma_xi)
    };
    (1.0 - r) * erfc(tau / SQRT_2) + r * erfc(a / SQRT_2)
}

/// `(1−r)·A(τ) + r·B(τ, σ_ξ)`, the bracket of the variance equation.
pub fn mixture(tau: f64, sigma_xi: f64, r: f64) -> f64 {
    let b = if r > 0.0 { b_unchecked(tau, sigma_xi) } else { 0.0 };
    (1.0 - r) * a_fun(tau) + r * b
}
