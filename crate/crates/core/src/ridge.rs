//! Ridge (ℓ2) risk curves.
//!
//! Closed forms for finite λ and for the interpolating limit, plus an
//! independent route through the Marchenko–Pastur eigenvalue average that
//! the closed forms are tested against.

use crate::error::{Error, Result};
use crate::model::{ModelConfig, RiskPoint};
use crate::numerics::{integrate, EndpointWeight, QuadratureSpec};
use std::f64::consts::PI;

/// Support of the Marchenko–Pastur law with ratio μ (unit-variance scaling).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpSupport {
    pub mu_minus: f64,
    pub mu_plus: f64,
    /// Weight of the zero eigenvalue, `max(0, 1 - 1/μ)`.
    pub point_mass_at_zero: f64,
}

impl MpSupport {
    pub fn new(mu: f64) -> Self {
        let root = mu.sqrt();
        Self {
            mu_minus: (1.0 - root).powi(2),
            mu_plus: (1.0 + root).powi(2),
            point_mass_at_zero: if mu > 1.0 { 1.0 - 1.0 / mu } else { 0.0 },
        }
    }
}

fn step(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Closed-form TE and GE at finite λ.
pub fn risk_l2(cfg: &ModelConfig) -> Result<RiskPoint> {
    cfg.validate()?;
    if !(cfg.lambda > 0.0) {
        return Err(Error::Domain("risk_l2 needs lambda > 0; use risk_l2_interp".into()));
    }
    let (s2, r) = cfg.effective_params();
    let (mu, alpha, lambda) = (cfg.mu, cfg.alpha, cfg.lambda);
    let support = MpSupport::new(mu);
    let t = lambda / alpha;
    let a = ((t + support.mu_plus) * (t + support.mu_minus)).sqrt();
    let gap = (1.0 - mu).abs();
    let norm = cfg.signal_power();

    let te = s2 * (1.0 - mu) * step(1.0 - mu)
        + 0.5
            * (s2 * (a - gap) - lambda * lambda * r / alpha
                + lambda / (alpha * a) * (r * lambda - s2) * (t + 1.0 + mu));
    let ge = mu * alpha * r * step(mu - 1.0) * (1.0 - 1.0 / mu)
        + 0.5 * (r * alpha * (a - gap) + (s2 - lambda * r) * (t + 1.0 + mu) / a + s2);
    Ok(RiskPoint::new(te / norm, ge / norm))
}

/// TE and GE in the interpolating limit λ → 0. GE is `+∞` at μ = 1 whenever
/// the effective noise is positive.
pub fn risk_l2_interp(cfg: &ModelConfig) -> RiskPoint {
    let (s2, _) = cfg.effective_params();
    let mu = cfg.mu;
    let norm = cfg.signal_power();
    let te = s2 * (1.0 - mu).max(0.0) / norm;
    if mu == 1.0 {
        let ge = if s2 > 0.0 { f64::INFINITY } else { 0.0 };
        return RiskPoint::new(0.0, ge);
    }
    let covered = cfg.mu_alpha().min(1.0);
    let bias = cfg.rho * covered * step(mu - 1.0) * (1.0 - 1.0 / mu);
    let variance = if mu < 1.0 {
        s2 / (1.0 - mu)
    } else {
        s2 * mu / (mu - 1.0)
    };
    RiskPoint::new(te, (bias + variance) / norm)
}

/// Dispatches on λ: the closed form for λ > 0, the interpolating limit at 0.
pub fn ridge_risk(cfg: &ModelConfig) -> Result<RiskPoint> {
    if cfg.lambda > 0.0 {
        risk_l2(cfg)
    } else {
        cfg.validate()?;
        Ok(risk_l2_interp(cfg))
    }
}

/// `(1/p) Σ f(λ_i)` for the eigenvalues of `X₀ᵀX₀`, `x ~ N(0, 1/n)`, in the
/// large-size limit. Eigenvalues are `α·z` with `z` Marchenko–Pastur(μ).
pub fn mp_average<F>(f: F, mu: f64, alpha: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    mp_average_with_panels(f, mu, alpha, 512)
}

pub fn mp_average_with_panels<F>(f: F, mu: f64, alpha: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(mu >= 0.0) || !(alpha > 0.0) {
        return Err(Error::Domain(format!("mp_average: mu = {mu}, alpha = {alpha}")));
    }
    if mu == 0.0 {
        return Ok(f(alpha));
    }
    let support = MpSupport::new(mu);
    let atom = if support.point_mass_at_zero > 0.0 {
        f(0.0) * support.point_mass_at_zero
    } else {
        0.0
    };
    let spec = QuadratureSpec::new(
        support.mu_minus,
        support.mu_plus,
        panels,
        EndpointWeight::SqrtBothEnds,
    );
    let bulk = integrate(
        |z| {
            let density = ((support.mu_plus - z) * (z - support.mu_minus)).max(0.0).sqrt()
                / (2.0 * PI * mu * z);
            density * f(alpha * z)
        },
        &spec,
    )?;
    Ok(atom + bulk)
}

/// TE and GE by direct spectral averaging of the eigen-sums; the
/// independent check on [`risk_l2`].
pub fn risk_l2_oracle(cfg: &ModelConfig) -> Result<RiskPoint> {
    cfg.validate()?;
    if !(cfg.lambda > 0.0) {
        return Err(Error::Domain("risk_l2_oracle needs lambda > 0".into()));
    }
    let (s2, r) = cfg.effective_params();
    let (mu, alpha, lambda) = (cfg.mu, cfg.alpha, cfg.lambda);
    let panels = if lambda / alpha < 1e-3 { 4096 } else { 512 };

    let te_sum = mp_average_with_panels(
        |x| (r * x + s2) / (x + lambda).powi(2),
        mu,
        alpha,
        panels,
    )?;
    let ge_sum = mp_average_with_panels(
        |x| (r * lambda * lambda + s2 * x) / (x + lambda).powi(2),
        mu,
        alpha,
        panels,
    )?;
    let norm = cfg.signal_power();
    let te = s2 * (1.0 - mu) + lambda * lambda * mu * te_sum;
    let ge = s2 + mu * alpha * ge_sum;
    Ok(RiskPoint::new(te / norm, ge / norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn cfg(alpha: f64, mu: f64, lambda: f64) -> ModelConfig {
        ModelConfig::new(alpha, mu, 0.2, 0.1, lambda).unwrap()
    }

    #[test]
    fn support_edges() {
        let s = MpSupport::new(4.0);
        assert_eq!((s.mu_minus, s.mu_plus), (1.0, 9.0));
        assert_eq!(s.point_mass_at_zero, 0.75);
        assert_eq!(MpSupport::new(0.5).point_mass_at_zero, 0.0);
    }

    #[test]
    fn closed_form_matches_oracle() {
        for &alpha in &[0.8, 2.0] {
            for &mu in &[0.3, 0.5, 0.9, 1.0, 1.3, 2.5, 4.0] {
                for &lambda in &[1e-3, 0.1, 1.0, 10.0] {
                    let c = cfg(alpha, mu, lambda);
                    let closed = risk_l2(&c).unwrap();
                    let oracle = risk_l2_oracle(&c).unwrap();
                    assert!((closed.te - oracle.te).abs() < 1e-7, "{c:?}");
                    assert!((closed.ge - oracle.ge).abs() < 1e-7, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn infinite_penalty_limit() {
        for &mu in &[0.5, 1.0, 3.0] {
            let r = risk_l2(&cfg(0.8, mu, 1e6)).unwrap();
            assert!((r.te - 1.0).abs() < 1e-3 && (r.ge - 1.0).abs() < 1e-3, "{r:?}");
            let o = risk_l2_oracle(&cfg(0.8, mu, 1e6)).unwrap();
            assert!((o.te - 1.0).abs() < 1e-3 && (o.ge - 1.0).abs() < 1e-3, "{o:?}");
        }
    }

    #[test]
    fn finite_lambda_suppresses_peak() {
        let r = risk_l2(&cfg(0.8, 1.0, 0.1)).unwrap();
        assert!(r.ge.is_finite() && r.ge < 2.0);
    }

    #[test]
    fn interp_examples() {
        let r = risk_l2_interp(&cfg(0.8, 0.5, 0.0));
        assert!((r.ge - 0.13 / (0.21 * 0.5)).abs() < 1e-12);
        let small = risk_l2(&cfg(0.8, 0.5, 1e-8)).unwrap();
        assert!((small.ge - r.ge).abs() < 1e-6);

        let noiseless = ModelConfig::new(2.0, 0.7, 0.2, 0.0, 0.0).unwrap();
        assert_eq!(risk_l2_interp(&noiseless).ge, 0.0);

        let over = ModelConfig::new(0.8, 2.0, 0.2, 0.0, 0.0).unwrap();
        assert!((risk_l2_interp(&over).ge - 0.5).abs() < 1e-15);

        let huge = risk_l2_interp(&cfg(0.8, 1e9, 0.0));
        assert!((huge.ge - 1.0).abs() < 1e-6);
    }

    #[test]
    fn singularity_sentinel() {
        let r = risk_l2_interp(&cfg(0.8, 1.0, 0.0));
        assert!(r.ge.is_infinite() && r.is_singular());
        assert_eq!(r.te, 0.0);
        let clean = ModelConfig::new(2.0, 1.0, 0.2, 0.0, 0.0).unwrap();
        assert_eq!(risk_l2_interp(&clean).ge, 0.0);
    }

    #[test]
    fn interpolation_has_zero_training_error() {
        for &mu in &[1.0, 1.5, 7.0] {
            assert_eq!(risk_l2_interp(&cfg(0.8, mu, 0.0)).te, 0.0);
        }
    }

    #[test]
    fn small_lambda_matches_interp_away_from_peak() {
        for i in 0..60 {
            let mu = 0.05 + i as f64 * 0.07;
            if (mu - 1.0).abs() < 0.05 {
                continue;
            }
            let c = cfg(0.8, mu, 1e-8);
            let finite = risk_l2(&c).unwrap();
            let limit = risk_l2_interp(&c);
            assert!((finite.te - limit.te).abs() < 1e-4, "mu={mu}");
            assert!((finite.ge - limit.ge).abs() < 1e-4, "mu={mu}");
        }
    }

    #[test]
    fn regimes_agree_at_mu_alpha_one() {
        let alpha = 0.8;
        let mu = 1.25;
        for &lambda in &[0.0, 0.01, 1.0] {
            let c = cfg(alpha, mu, lambda);
            let (s2, r) = c.effective_params();
            // the overspecified substitution evaluated at μα = 1
            let over = (c.sigma * c.sigma, c.rho / c.mu_alpha());
            assert!((s2 - over.0).abs() < 1e-12 && (r - over.1).abs() < 1e-12);
            let left = ridge_risk(&c.with_mu(mu - 1e-13)).unwrap();
            let right = ridge_risk(&c.with_mu(mu + 1e-13)).unwrap();
            assert!((left.ge - right.ge).abs() < 1e-10);
            assert!((left.te - right.te).abs() < 1e-10);
        }
    }

    #[test]
    fn peak_is_inverse_distance_near_one() {
        // exponent of GE against |1 - μ| on windows that shrink onto μ = 1
        let fit = |mus: &[f64]| {
            let xs: Vec<f64> = mus.iter().map(|m| (m - 1.0f64).abs().ln()).collect();
            let ys: Vec<f64> = mus
                .iter()
                .map(|m| risk_l2_interp(&cfg(0.8, *m, 0.0)).ge.ln())
                .collect();
            slope(&xs, &ys)
        };
        let right: Vec<f64> = (0..10).map(|i| 1.0 + 1e-5 * 10f64.powf(i as f64 / 9.0)).collect();
        let left: Vec<f64> = right.iter().map(|m| 2.0 - m).collect();
        assert!((fit(&right) + 1.0).abs() < 0.02, "{}", fit(&right));
        assert!((fit(&left) + 1.0).abs() < 0.02, "{}", fit(&left));
        for &eps in &[1e-3, 1e-5, 1e-7] {
            let r = risk_l2_interp(&cfg(0.8, 1.0 + eps, 0.0)).ge * eps;
            let l = risk_l2_interp(&cfg(0.8, 1.0 - eps, 0.0)).ge * eps;
            assert!(r.is_finite() && l.is_finite() && (r - l).abs() / l < 0.05);
        }
    }

    #[test]
    fn training_error_grows_with_penalty() {
        for &mu in &[0.4, 1.0, 2.0] {
            let mut prev = 0.0;
            for k in 0..40 {
                let lambda = 1e-4 * 10f64.powf(k as f64 * 0.2);
                let te = risk_l2(&cfg(0.8, mu, lambda)).unwrap().te;
                assert!(te >= prev - 1e-12, "mu={mu} lambda={lambda}");
                prev = te;
            }
        }
    }

    #[test]
    fn mp_average_normalization_and_atom() {
        for &mu in &[0.2, 1.0, 3.0] {
            assert!((mp_average(|_| 1.0, mu, 0.8).unwrap() - 1.0).abs() < 1e-10);
        }
        let atom = mp_average(|x| if x == 0.0 { 1.0 } else { 0.0 }, 4.0, 1.0).unwrap();
        assert!((atom - 0.75).abs() < 1e-15);
        assert!((mp_average(|x| x, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((mp_average(|x| x, 2.0, 0.6).unwrap() - 0.6).abs() < 1e-10);
    }

    #[test]
    fn mp_mean_matches_sampled_wishart() {
        // X: m × p with N(0, 1/n) entries, n = m / α; mean eigenvalue of XᵀX is α.
        let (m, p, alpha) = (400usize, 400usize, 1.0);
        let n = (m as f64 / alpha) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let scale = 1.0 / (n as f64).sqrt();
        let x = DMatrix::from_fn(m, p, |_, _| { let v: f64 = StandardNormal.sample(&mut rng); scale * v });
        let gram = x.transpose() * &x;
        let eig = gram.symmetric_eigenvalues();
        let sampled = eig.iter().sum::<f64>() / p as f64;
        let theory = mp_average(|v| v, p as f64 / m as f64, alpha).unwrap();
        assert!((sampled - theory).abs() < 0.02, "{sampled} vs {theory}");
        let sampled_sq = eig.iter().map(|v| v * v).sum::<f64>() / p as f64;
        let theory_sq = mp_average(|v| v * v, 1.0, alpha).unwrap();
        assert!((sampled_sq - theory_sq).abs() / theory_sq < 0.03);
    }

    #[test]
    fn small_mu_limit() {
        let c = cfg(0.8, 1e-4, 0.1);
        let o = risk_l2_oracle(&c).unwrap();
        let base = c.sigma_eff_sq() / c.signal_power();
        assert!((o.ge - base).abs() < 1e-3, "{} vs {}", o.ge, base);
        let c2 = cfg(0.8, 2e-4, 0.1);
        let o2 = risk_l2_oracle(&c2).unwrap();
        // O(μ): halving μ halves the deviation
        let ratio = (o2.ge - c2.sigma_eff_sq() / c2.signal_power()) / (o.ge - base);
        assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn lambda_zero_is_rejected_by_finite_branch() {
        assert!(risk_l2(&cfg(0.8, 0.5, 0.0)).is_err());
        assert!(risk_l2_oracle(&cfg(0.8, 0.5, 0.0)).is_err());
    }

    fn slope(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        sxy / sxx
    }
}
