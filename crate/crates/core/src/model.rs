//! Generative and inference model: the five dimensionless knobs, regime
//! bookkeeping, and finite-size instance sampling.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DMatrixView, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Model knobs. `lambda == 0` encodes the interpolating limit λ → 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelConfig {
    /// Undersampling m/n.
    pub alpha: f64,
    /// Overparametrization p/m.
    pub mu: f64,
    /// Probability that a generative coefficient is nonzero.
    pub rho: f64,
    /// Measurement noise standard deviation.
    pub sigma: f64,
    /// Penalty strength.
    pub lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Specification {
    /// p ≤ n: generative columns are missing from the fit.
    Underspecified,
    /// p ≥ n: the fit carries effect-free extra columns.
    Overspecified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parametrization {
    Under,
    Over,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regime {
    pub specification: Specification,
    pub parametrization: Parametrization,
}

impl ModelConfig {
    pub fn new(alpha: f64, mu: f64, rho: f64, sigma: f64, lambda: f64) -> Result<Self> {
        let cfg = Self {
            alpha,
            mu,
            rho,
            sigma,
            lambda,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.alpha.is_finite()
            && self.mu >= 0.0
            && self.mu.is_finite()
            && (0.0..=1.0).contains(&self.rho)
            && self.sigma >= 0.0
            && self.sigma.is_finite()
            && self.lambda >= 0.0
            && self.lambda.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{self:?}")))
        }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        Self { rho, ..self }
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        Self { sigma, ..self }
    }

    /// p/n.
    pub fn mu_alpha(&self) -> f64 {
        self.mu * self.alpha
    }

    /// `E|y_i|² = σ² + ρ`, the normalizer of both TE and GE.
    pub fn signal_power(&self) -> f64 {
        self.sigma * self.sigma + self.rho
    }

    pub fn classify(&self) -> Regime {
        let specification = if self.mu_alpha() <= 1.0 {
            Specification::Underspecified
        } else {
            Specification::Overspecified
        };
        let parametrization = if self.mu <= 1.0 {
            Parametrization::Under
        } else {
            Parametrization::Over
        };
        Regime {
            specification,
            parametrization,
        }
    }

    /// Noise variance seen by the fit: unobserved generative columns add
    /// `(1 - μα)ρ` when μα ≤ 1.
    pub fn sigma_eff_sq(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        let ma = self.mu_alpha();
        if ma <= 1.0 {
            s2 + (1.0 - ma) * self.rho
        } else {
            s2
        }
    }

    /// `(noise variance, sparsity)` in the fit's own coordinates: the
    /// underspecified pair `(σ_eff², ρ)`, or `(σ², ρ/(μα))` when the fit is
    /// overspecified.
    pub fn effective_params(&self) -> (f64, f64) {
        let ma = self.mu_alpha();
        if ma <= 1.0 {
            (self.sigma_eff_sq(), self.rho)
        } else {
            (self.sigma * self.sigma, self.rho / ma)
        }
    }
}

/// Normalized training and generalization error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiskPoint {
    pub te: f64,
    /// `+∞` marks the μ = 1, λ = 0 divergence.
    pub ge: f64,
}

impl RiskPoint {
    pub fn new(te: f64, ge: f64) -> Self {
        Self { te, ge }
    }

    pub fn is_singular(&self) -> bool {
        self.ge.is_infinite()
    }
}

/// One finite-size draw of the generative model plus the inference design.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub cfg: ModelConfig,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    /// m × max(n, p); entries N(0, 1/n). Columns past n are the extra,
    /// effect-free columns of the overspecified fit.
    pub design: DMatrix<f64>,
    pub beta: DVector<f64>,
    pub noise: DVector<f64>,
    pub y: DVector<f64>,
}

impl Instance {
    /// The first p columns of the design, as used by the fit.
    pub fn inference_design(&self) -> DMatrixView<'_, f64> {
        self.design.columns(0, self.p)
    }
}

/// `(m, p)` for `n` generative parameters.
pub fn dimensions(cfg: &ModelConfig, n: usize) -> (usize, usize) {
    let m = (cfg.alpha * n as f64).round() as usize;
    let p = (cfg.mu * m as f64).round() as usize;
    (m, p)
}

pub fn sample_instance(cfg: &ModelConfig, n: usize, seed: u64) -> Result<Instance> {
    sample_trial_instance(cfg, n, seed, 0)
}

/// Draws the instance for trial `trial` of a run keyed by `seed`. The RNG
/// stream depends only on `(seed, trial)`.
pub fn sample_trial_instance(cfg: &ModelConfig, n: usize, seed: u64, trial: u64) -> Result<Instance> {
    cfg.validate()?;
    let (m, p) = dimensions(cfg, n);
    if n < 10 || m == 0 || p == 0 {
        return Err(Error::Dimension { n, m, p });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);

    let beta = DVector::from_fn(n, |_, _| {
        let active = rng.gen::<f64>() < cfg.rho;
        let slab: f64 = rng.sample(StandardNormal);
        if active {
            slab
        } else {
            0.0
        }
    });
    let noise = DVector::from_fn(m, |_, _| cfg.sigma * rng.sample::<f64, _>(StandardNormal));
    let scale = 1.0 / (n as f64).sqrt();
    let cols = n.max(p);
    let design = DMatrix::from_fn(m, cols, |_, _| scale * rng.sample::<f64, _>(StandardNormal));
    let y = design.columns(0, n) * &beta + &noise;

    Ok(Instance {
        cfg: *cfg,
        n,
        m,
        p,
        design,
        beta,
        noise,
        y,
    })
}
