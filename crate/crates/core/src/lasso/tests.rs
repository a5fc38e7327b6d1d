use super::*;
use crate::ridge::risk_l2_interp;

fn fig1(mu: f64) -> ModelConfig {
    ModelConfig::new(0.8, mu, 0.2, 0.1, 0.0).unwrap()
}

fn noiseless(alpha: f64, mu: f64) -> ModelConfig {
    ModelConfig::new(alpha, mu, 0.2, 0.0, 0.0).unwrap()
}

fn ge(cfg: &ModelConfig) -> f64 {
    lasso_risk(cfg).unwrap().0.ge
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn assert_residuals(cfg: &ModelConfig, state: &SelfConsistentState) {
    for (i, r) in residuals(cfg, state).iter().enumerate() {
        assert!(r.abs() <= 1e-9, "equation {i} residual {r} at {cfg:?} -> {state:?}");
    }
}

#[test]
fn below_peak_matches_ridge() {
    for i in 1..20 {
        let cfg = fig1(i as f64 * 0.05);
        let (l1, state) = risk_l1_interp(&cfg).unwrap();
        let l2 = risk_l2_interp(&cfg);
        assert!((l1.ge - l2.ge).abs() <= 1e-12 && (l1.te - l2.te).abs() <= 1e-12);
        assert_eq!(state.branch, Branch::InterpMuBelow1);
        assert_residuals(&cfg, &state);
    }
    let (point, _) = risk_l1_interp(&fig1(0.5)).unwrap();
    assert!((point.ge - 1.238_095_238_095).abs() < 1e-9);
}

#[test]
fn small_lambda_approaches_interpolating_limit() {
    let cfg = fig1(0.5).with_lambda(1e-6);
    let state = solve_l1_finite(&cfg).unwrap();
    assert_residuals(&cfg, &state);
    let (limit, _) = risk_l1_interp(&fig1(0.5)).unwrap();
    assert!((state.risk(&cfg).ge - limit.ge).abs() < 1e-3);
}

#[test]
fn finite_lambda_residuals_vanish() {
    for &lambda in &[1e-4, 1e-2, 0.1, 1.0] {
        for &mu in &[0.2, 0.9, 1.0, 1.3, 3.0, 20.0] {
            for &sigma in &[0.0, 0.1, 0.5] {
                let cfg = ModelConfig::new(0.8, mu, 0.2, sigma, lambda).unwrap();
                let state = solve_l1_finite(&cfg).unwrap();
                assert_residuals(&cfg, &state);
                assert!(state.rho_hat >= 0.0 && state.rho_hat <= 1.0);
                assert!(state.sigma_xi > 0.0 && state.tau >= 0.0);
            }
        }
    }
}

#[test]
fn finite_lambda_curve_has_no_peak() {
    let curve: Vec<f64> = (0..41)
        .map(|i| ge(&fig1(0.8 + i as f64 * 0.01).with_lambda(0.1)))
        .collect();
    assert!(curve.iter().all(|g| g.is_finite() && *g < 1.0));
    // no interior maximum anywhere across μ = 1
    assert!(curve.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn no_sparsity_gives_no_benefit() {
    for i in 1..10 {
        let mu = i as f64 * 0.1;
        let cfg = ModelConfig::new(0.8, mu, 1.0, 0.1, 1e-6).unwrap();
        let l1 = ge(&cfg);
        let l2 = risk_l2_interp(&cfg.with_lambda(0.0)).ge;
        assert!(l1 >= l2 - 1e-3, "mu={mu}: {l1} vs {l2}");
    }
}

#[test]
fn interpolating_branch_above_one() {
    for &mu in &[1.01, 1.1, 2.0, 5.0, 20.0, 148.0, 1e3, 1e6] {
        let cfg = fig1(mu);
        let (point, state) = risk_l1_interp(&cfg).unwrap();
        assert_eq!(state.branch, Branch::InterpMuAbove1);
        assert_residuals(&cfg, &state);
        assert!((mu * state.rho_hat - 1.0).abs() <= 1e-12);
        assert_eq!(point.te, 0.0);
        assert!(point.ge > 0.0 && point.ge.is_finite());
    }
    let (point, _) = risk_l1_interp(&fig1(1.0)).unwrap();
    assert!(point.ge.is_infinite());
}

#[test]
fn peak_shape_matches_ridge_variance() {
    let cfg = fig1(1.01);
    let (s2, _) = cfg.effective_params();
    let scaled = ge(&cfg) * (cfg.mu - 1.0) * cfg.signal_power() / s2;
    assert!((scaled - 1.0).abs() < 0.05, "{scaled}");
    let near = fig1(1.0 + 1e-5);
    let scaled = ge(&near) * 1e-5 * near.signal_power() / near.effective_params().0;
    assert!((scaled - 1.0).abs() < 1e-3, "{scaled}");
}

#[test]
fn sparsity_helps_away_from_peak() {
    for i in 0..40 {
        let mu = 1.2 * 1.15f64.powi(i);
        let cfg = fig1(mu);
        assert!(ge(&cfg) <= risk_l2_interp(&cfg).ge + 1e-9, "mu={mu}");
    }
}

#[test]
fn lasso_peak_is_slightly_taller_than_ridge() {
    let cfg = fig1(1.01);
    assert!(ge(&cfg) > risk_l2_interp(&cfg).ge);
}

#[test]
fn large_overparametrization_saturates() {
    // overshoots 1 slightly and relaxes back like 1/log μ
    let g = ge(&fig1(1e6));
    assert!(g > 0.95 && g < 1.06, "{g}");
    let far = ge(&fig1(1e100));
    assert!((far - 1.0).abs() < (g - 1.0).abs(), "{far}");
}

#[test]
fn intermediate_regime_is_far_below_ridge() {
    let cfg = ModelConfig::new(0.8, 5f64.exp(), 0.02, 1e-3f64.sqrt(), 0.0).unwrap();
    let floor = 1e-3 / (1e-3 + 0.02);
    let g = ge(&cfg);
    assert!(g < 0.2 * risk_l2_interp(&cfg).ge);
    assert!(g > 0.5 * floor && g < 3.0 * floor, "{g} vs {floor}");
    // deeper in the regime: σ² and ρ both small against 1/log μ
    let deep = ModelConfig::new(0.8, 4f64.exp(), 1e-3, 1e-5f64.sqrt(), 0.0).unwrap();
    let floor = 1e-5 / (1e-5 + 1e-3);
    let g = ge(&deep);
    assert!((g / floor - 1.0).abs() < 0.3, "{g} vs {floor}");
}

#[test]
fn noiseless_window_below_one() {
    let cfg = ModelConfig::new(2.0, 0.7, 0.2, 0.0, 0.0).unwrap();
    let (point, state) = zero_noise_branch(&cfg).unwrap();
    assert_eq!(point.ge, 0.0);
    assert_eq!(state.branch, Branch::ZeroNoisePerfect);
    assert_residuals(&cfg, &state);
}

#[test]
fn noiseless_recovery_plateau() {
    let mc = mu_c(0.2, 0.8).unwrap().mu_c;
    for &mu in &[1.25, 1.5, 2.0, 3.0, 4.0, mc - 1e-6] {
        let cfg = noiseless(0.8, mu);
        let (point, state) = zero_noise_branch(&cfg).unwrap();
        assert_eq!(point.ge, 0.0, "mu={mu}");
        assert_eq!(state.branch, Branch::ZeroNoisePerfect);
        assert!(mu * state.rho_hat <= 1.0 + 1e-12);
        assert_residuals(&cfg, &state);
    }
    for &mu in &[mc + 1e-3, 10.0, 18.0, 25.0] {
        let cfg = noiseless(0.8, mu);
        let (point, state) = zero_noise_branch(&cfg).unwrap();
        assert!(point.ge > 0.0, "mu={mu}");
        assert_eq!(state.branch, Branch::ZeroNoiseFailed);
        assert_residuals(&cfg, &state);
    }
}

#[test]
fn recovered_fraction_jumps_down_past_one_over_alpha() {
    let alpha = 0.8;
    let (_, left) = zero_noise_branch(&noiseless(alpha, 1.0 / alpha - 1e-6)).unwrap();
    let (_, right) = zero_noise_branch(&noiseless(alpha, 1.0 / alpha + 1e-6)).unwrap();
    assert!((left.rho_hat - alpha).abs() < 1e-5);
    assert!(right.rho_hat < left.rho_hat - 0.01, "{} -> {}", left.rho_hat, right.rho_hat);
}

#[test]
fn quadratic_rise_above_mu_c() {
    let mc = mu_c(0.2, 0.8).unwrap().mu_c;
    let ds = [0.02, 0.04, 0.06, 0.08, 0.1];
    let gs: Vec<f64> = ds.iter().map(|d| ge(&noiseless(0.8, mc + d))).collect();
    let slope = log_slope(&ds, &gs);
    assert!((slope - 2.0).abs() < 0.1, "{slope}");
}

#[test]
fn linear_vanishing_toward_one_over_alpha() {
    let alpha = 0.8;
    let rho = 0.2;
    let tau0 = brent_root(|t| f1(t, rho) - alpha, &Bracket::new(0.0, 40.0)).unwrap();
    let constant = alpha * alpha / (alpha - f2(tau0, rho));
    for d in [1e-4, 1e-5] {
        let g = ge(&noiseless(alpha, 1.0 / alpha - d));
        assert!((g / (constant * d) - 1.0).abs() < 0.02, "d={d}: ratio {}", g / (constant * d));
    }
    let ds = [1e-5, 1e-4, 1e-3];
    let gs: Vec<f64> = ds.iter().map(|d| ge(&noiseless(alpha, 1.0 / alpha - d))).collect();
    assert!((log_slope(&ds, &gs) - 1.0).abs() < 0.05);
}

#[test]
fn two_thirds_power_at_critical_alpha() {
    let ac = alpha_c(0.2).unwrap().alpha_c;
    let ds = [1e-5, 1e-4, 1e-3];
    let gs: Vec<f64> = ds.iter().map(|d| ge(&noiseless(ac, 1.0 / ac - d))).collect();
    let slope = log_slope(&ds, &gs);
    assert!((slope - 2.0 / 3.0).abs() < 0.03, "{slope}");
}

#[test]
fn below_critical_alpha_never_recovers() {
    for &mu in &[1.5, 2.0, 2.5, 5.0] {
        let cfg = noiseless(0.45, mu);
        let (point, state) = zero_noise_branch(&cfg).unwrap();
        assert!(point.ge > 0.0, "mu={mu}");
        assert_ne!(state.branch, Branch::ZeroNoisePerfect);
    }
}

#[test]
fn training_error_identity() {
    let cfg = fig1(0.6).with_lambda(0.05);
    let (point, state) = lasso_risk(&cfg).unwrap();
    let c = 1.0 - cfg.mu * state.rho_hat;
    assert!((point.te - c * c * point.ge).abs() < 1e-15);
    assert!(point.te < point.ge);
}

#[test]
fn rejects_bad_inputs() {
    assert!(solve_l1_finite(&fig1(0.5)).is_err());
    assert!(risk_l1_interp(&fig1(0.5).with_lambda(0.1)).is_err());
    assert!(zero_noise_branch(&fig1(2.0)).is_err());
    let silent = ModelConfig::new(0.8, 2.0, 0.0, 0.0, 0.0).unwrap();
    assert!(matches!(lasso_risk(&silent), Err(Error::InvalidConfig(_))));
}
