use crate::error::{Error, Result};
use crate::model::{Instance, ModelConfig, RiskPoint};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SVD};
use std::collections::HashSet;

/// Penalized least-squares estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub beta_hat: DVector<f64>,
    pub iterations: usize,
    /// `½|y − Xβ̂|² + λ·V(β̂)`.
    pub objective: f64,
    pub converged: bool,
}

/// Ridge estimate `(XᵀX + λ)⁻¹Xᵀy`; minimum-norm least squares at λ = 0.
pub fn fit_ridge(instance: &Instance, lambda: f64) -> Result<FitResult> {
    fit_ridge_matrix(&instance.inference_design().into_owned(), &instance.y, lambda)
}

pub(crate) fn fit_ridge_matrix(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Result<FitResult> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("ridge needs lambda >= 0, got {lambda}")));
    }
    let (m, p) = x.shape();
    let beta_hat = if lambda == 0.0 {
        let svd = SVD::try_new(x.clone(), true, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::NumericalRankFailure("SVD did not converge".into()))?;
        let s_max = svd.singular_values.max();
        svd.solve(y, s_max * 1e-10)
            .map_err(|e| Error::NumericalRankFailure(e.into()))?
    } else if p <= m {
        let mut gram = x.tr_mul(x);
        for i in 0..p {
            gram[(i, i)] += lambda;
        }
        let chol = Cholesky::new(gram).ok_or_else(|| Error::NumericalRankFailure("XᵀX + λ not positive definite".into()))?;
        chol.solve(&x.tr_mul(y))
    } else {
        let mut gram = x * x.transpose();
        for i in 0..m {
            gram[(i, i)] += lambda;
        }
        let chol = Cholesky::new(gram).ok_or_else(|| Error::NumericalRankFailure("XXᵀ + λ not positive definite".into()))?;
        x.tr_mul(&chol.solve(y))
    };
    let resid = y - x * &beta_hat;
    let objective = 0.5 * resid.norm_squared() + 0.5 * lambda * beta_hat.norm_squared();
    Ok(FitResult {
        beta_hat,
        iterations: 1,
        objective,
        converged: true,
    })
}

const TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100_000;
const STAGES: usize = 20;
const ACTIVE_PASSES: usize = 10;

fn soft(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Column-major design with cached column norms.
struct Design<'a> {
    data: &'a [f64],
    m: usize,
    p: usize,
    sq_norms: Vec<f64>,
}

impl<'a> Design<'a> {
    fn new(data: &'a [f64], m: usize, p: usize) -> Self {
        let sq_norms = (0..p).map(|j| data[j * m..(j + 1) * m].iter().map(|v| v * v).sum()).collect();
        Self { data, m, p, sq_norms }
    }

    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.m..(j + 1) * self.m]
    }

    fn dot(&self, j: usize, v: &[f64]) -> f64 {
        self.col(j).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    fn axpy(&self, j: usize, scale: f64, v: &mut [f64]) {
        for (out, a) in v.iter_mut().zip(self.col(j)) {
            *out += scale * a;
        }
    }

    fn residual(&self, y: &[f64], beta: &[f64]) -> Vec<f64> {
        let mut r = y.to_vec();
        for (j, b) in beta.iter().enumerate() {
            if *b != 0.0 {
                self.axpy(j, -b, &mut r);
            }
        }
        r
    }

    fn select(&self, active: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, active.len(), |i, k| self.data[active[k] * self.m + i])
    }
}

/// One cyclic pass over `coords`; returns the largest coordinate change.
fn cd_pass(x: &Design, coords: &[usize], lambda: f64, beta: &mut [f64], r: &mut [f64]) -> f64 {
    let mut max_step: f64 = 0.0;
    for &j in coords {
        let nj = x.sq_norms[j];
        if nj == 0.0 {
            continue;
        }
        let old = beta[j];
        let new = soft(x.dot(j, r) + nj * old, lambda) / nj;
        if new != old {
            x.axpy(j, old - new, r);
            beta[j] = new;
            max_step = max_step.max((new - old).abs());
        }
    }
    max_step
}

fn kkt_violation(x: &Design, lambda: f64, beta: &[f64], r: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..x.p {
        let g = x.dot(j, r);
        let v = if beta[j] == 0.0 {
            g.abs() - lambda
        } else {
            (g - lambda * beta[j].signum()).abs()
        };
        worst = worst.max(v);
    }
    worst
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Cholesky factor of the Gram block of the current support, updated one
/// column at a time.
struct GramFactor {
    order: Vec<usize>,
    chol: Option<Cholesky<f64, Dyn>>,
}

impl GramFactor {
    fn new() -> Self {
        Self {
            order: Vec::new(),
            chol: None,
        }
    }

    /// `X_orderᵀ x_j`.
    fn cross(&self, x: &Design, j: usize) -> DVector<f64> {
        let xj = x.col(j);
        DVector::from_iterator(self.order.len(), self.order.iter().map(|&i| x.dot(i, xj)))
    }

    /// Refactors onto `active`, reusing the current factor where possible.
    /// Returns the support in factor order.
    fn sync(&mut self, x: &Design, active: &[usize]) -> Option<&[usize]> {
        let keep: HashSet<usize> = active.iter().copied().collect();
        let mut k = self.order.len();
        while k > 0 {
            k -= 1;
            if !keep.contains(&self.order[k]) {
                self.order.remove(k);
                self.chol = match self.chol.take() {
                    Some(c) if c.l_dirty().nrows() > 1 => Some(c.remove_column(k)),
                    _ => None,
                };
            }
        }
        let present: HashSet<usize> = self.order.iter().copied().collect();
        for &j in active {
            if present.contains(&j) {
                continue;
            }
            let diag = x.sq_norms[j];
            self.chol = match self.chol.take() {
                Some(c) => {
                    let cross = self.cross(x, j);
                    let n = cross.len() + 1;
                    let col = DVector::from_fn(n, |k, _| if k + 1 < n { cross[k] } else { diag });
                    let updated = c.insert_column(n - 1, col);
                    let d = updated.l_dirty()[(n - 1, n - 1)];
                    (d > 0.0 && d.is_finite()).then_some(updated)
                }
                None => Cholesky::new(DMatrix::from_element(1, 1, diag)),
            };
            if self.chol.is_none() {
                self.order.clear();
                return None;
            }
            self.order.push(j);
        }
        Some(&self.order)
    }

    fn reset(&mut self) {
        self.order.clear();
        self.chol = None;
    }

    /// Null vector of the support `order ∪ {k}` when `order` spans the
    /// rows: `(−G⁻¹X_orderᵀx_k, 1)`.
    fn null_direction(&self, x: &Design, k: usize) -> Option<DVector<f64>> {
        let chol = self.chol.as_ref()?;
        let w = chol.solve(&self.cross(x, k));
        Some(DVector::from_fn(w.len() + 1, |i, _| if i < w.len() { -w[i] } else { 1.0 }))
    }
}

/// Feature-sign search (Lee, Battle, Raina & Ng, 2007) from the warm start
/// `beta`: exact minimization on a sign pattern, a line search over the
/// sign changes, and one-at-a-time activation of KKT violators. Support
/// sets larger than m are first shrunk along null-space directions of the
/// active columns, which lowers the penalty at a fixed fit. Returns the
/// iteration count, or `None` with `beta` untouched if it does not
/// terminate.
fn feature_sign(
    x: &Design,
    y: &[f64],
    xty: &[f64],
    lambda: f64,
    kkt_tol: f64,
    gram: &mut GramFactor,
    beta: &mut [f64],
) -> Option<usize> {
    let mut b = beta.to_vec();
    let mut s: Vec<f64> = b.iter().map(|v| sign(*v)).collect();
    for it in 1..=(10 * x.m + 100) {
        let support: Vec<usize> = (0..x.p).filter(|&j| s[j] != 0.0).collect();
        if support.is_empty() {
            if !activate(x, y, lambda, kkt_tol, &b, &mut s) {
                beta.copy_from_slice(&b);
                return Some(it);
            }
            continue;
        }
        if support.len() == x.m + 1 && gram.order.len() == x.m {
            let extra: Vec<usize> = support.iter().copied().filter(|j| !gram.order.contains(j)).collect();
            if let [k] = extra[..] {
                let mut cols = gram.order.clone();
                cols.push(k);
                if let Some(d) = gram.null_direction(x, k) {
                    if step_along_null(&d, &cols, &mut b, &mut s) {
                        continue;
                    }
                }
            }
        }
        if support.len() > x.m {
            gram.reset();
            let sa = DVector::from_fn(support.len(), |k, _| s[support[k]]);
            if !shrink_support(&x.select(&support), &support, &sa, &mut b, &mut s) {
                return None;
            }
            continue;
        }
        let Some(order) = gram.sync(x, &support) else {
            gram.reset();
            return None;
        };
        let active = order.to_vec();
        let chol = gram.chol.as_ref().expect("factor matches the support");
        let rhs = DVector::from_fn(active.len(), |k, _| xty[active[k]] - lambda * s[active[k]]);
        let target = chol.solve(&rhs);
        let ba = DVector::from_fn(active.len(), |k, _| b[active[k]]);
        let dir = &target - &ba;
        let r0 = DVector::from_vec(x.residual(y, &b));
        let mut u = DVector::zeros(x.m);
        for (k, &j) in active.iter().enumerate() {
            x.axpy(j, dir[k], u.as_mut_slice());
        }
        let objective = |t: f64| 0.5 * (&r0 - t * &u).norm_squared() + lambda * (&ba + t * &dir).abs().sum();
        // candidates: the full step and every zero crossing on the way
        let mut best = (1.0, objective(1.0), None);
        for k in 0..active.len() {
            if ba[k] != 0.0 && target[k] * ba[k] < 0.0 {
                let t = ba[k] / (ba[k] - target[k]);
                let f = objective(t);
                if f < best.1 {
                    best = (t, f, Some(k));
                }
            }
        }
        let (t, _, crossing) = best;
        let solved_signs: Vec<f64> = active.iter().map(|&j| s[j]).collect();
        for (k, &j) in active.iter().enumerate() {
            b[j] = if crossing.is_none() { target[k] } else { ba[k] + t * dir[k] };
            if crossing == Some(k) {
                b[j] = 0.0;
            }
            s[j] = sign(b[j]);
        }
        let consistent = active.iter().zip(&solved_signs).all(|(&j, &sj)| s[j] == sj);
        if crossing.is_none() && consistent && !activate(x, y, lambda, kkt_tol, &b, &mut s) {
            beta.copy_from_slice(&b);
            return Some(it);
        }
    }
    None
}

/// Marks the worst KKT violator active with the descent sign; `false` if
/// there is none.
fn activate(x: &Design, y: &[f64], lambda: f64, kkt_tol: f64, b: &[f64], s: &mut [f64]) -> bool {
    let r = x.residual(y, b);
    let mut worst = (kkt_tol, None);
    for j in 0..x.p {
        if b[j] == 0.0 {
            let g = x.dot(j, &r);
            if g.abs() - lambda > worst.0 {
                worst = (g.abs() - lambda, Some((j, sign(g))));
            }
        }
    }
    match worst.1 {
        Some((j, sj)) => {
            s[j] = sj;
            true
        }
        None => false,
    }
}

/// Moves along `−P s` (P the projector onto the null space of the active
/// columns) until the first coefficient reaches zero, then drops it.
fn shrink_support(xa: &DMatrix<f64>, active: &[usize], sa: &DVector<f64>, b: &mut [f64], s: &mut [f64]) -> bool {
    let Some(chol) = Cholesky::new(xa * xa.transpose()) else {
        return false;
    };
    let w = chol.solve(&(xa * sa));
    let d = -(sa - xa.tr_mul(&w));
    step_along_null(&d, active, b, s)
}

/// Moves the coefficients on `cols` along the null direction `d` (flipped
/// if needed so the ℓ1 norm does not grow) until the first one reaches
/// zero, then drops it. The fit is unchanged.
fn step_along_null(d: &DVector<f64>, cols: &[usize], b: &mut [f64], s: &mut [f64]) -> bool {
    let slope: f64 = cols.iter().zip(d.iter()).map(|(&j, dk)| s[j] * dk).sum();
    let dir = if slope > 0.0 { -1.0 } else { 1.0 };
    let mut step = f64::INFINITY;
    let mut blocking = None;
    for (k, &j) in cols.iter().enumerate() {
        let dk = dir * d[k];
        if dk * s[j] < 0.0 {
            let t = b[j] / -dk;
            if t < step {
                step = t;
                blocking = Some(j);
            }
        }
    }
    let Some(jb) = blocking else {
        return false;
    };
    for (k, &j) in cols.iter().enumerate() {
        b[j] += step * dir * d[k];
        if b[j] != 0.0 && sign(b[j]) != s[j] {
            b[j] = 0.0;
        }
    }
    b[jb] = 0.0;
    for &j in cols {
        s[j] = sign(b[j]);
    }
    true
}

fn objective_l1(x: &Design, y: &[f64], lambda: f64, beta: &[f64]) -> f64 {
    let r = x.residual(y, beta);
    0.5 * r.iter().map(|v| v * v).sum::<f64>() + lambda * beta.iter().map(|b| b.abs()).sum::<f64>()
}

/// Runs feature-sign from `start`; accepts the result if it passes the
/// KKT check.
fn exact_stage(x: &Design, y: &[f64], xty: &[f64], lambda: f64, kkt_tol: f64, gram: &mut GramFactor, start: &[f64]) -> Option<(Vec<f64>, usize)> {
    let mut candidate = start.to_vec();
    let iterations = feature_sign(x, y, xty, lambda, kkt_tol, gram, &mut candidate)?;
    let r = x.residual(y, &candidate);
    (kkt_violation(x, lambda, &candidate, &r) <= 100.0 * kkt_tol).then_some((candidate, iterations))
}

/// Solves one λ from the warm start `beta`; returns the iteration count.
/// An exact active-set solve from the previous solution is tried first;
/// coordinate descent takes over if it fails.
fn lasso_stage(x: &Design, y: &[f64], xty: &[f64], lambda: f64, gram: &mut GramFactor, beta: &mut [f64]) -> Result<usize> {
    let scale = 1.0 + y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let kkt_tol = 1e-9 * scale;
    if let Some((exact, iterations)) = exact_stage(x, y, xty, lambda, kkt_tol, gram, beta) {
        beta.copy_from_slice(&exact);
        return Ok(iterations);
    }
    let all: Vec<usize> = (0..x.p).collect();
    let mut r = x.residual(y, beta);
    let mut sweeps = 0;
    let mut next_exact = 1;
    loop {
        let full = cd_pass(x, &all, lambda, beta, &mut r);
        sweeps += 1;
        let active: Vec<usize> = (0..x.p).filter(|&j| beta[j] != 0.0).collect();
        for _ in 0..ACTIVE_PASSES {
            sweeps += 1;
            if cd_pass(x, &active, lambda, beta, &mut r) < TOL {
                break;
            }
        }
        if full < TOL {
            r = x.residual(y, beta);
            if kkt_violation(x, lambda, beta, &r) <= kkt_tol {
                return Ok(sweeps);
            }
        }
        if sweeps >= next_exact {
            next_exact = 2 * sweeps;
            if let Some((exact, iterations)) = exact_stage(x, y, xty, lambda, kkt_tol, gram, beta) {
                beta.copy_from_slice(&exact);
                return Ok(sweeps + iterations);
            }
        }
        if sweeps > MAX_SWEEPS {
            let residual = kkt_violation(x, lambda, beta, &r);
            return Err(Error::MaxIterExceeded {
                iterations: sweeps,
                last: lambda,
                residual,
            });
        }
    }
}

/// Lasso along a geometric λ path: each stage is solved exactly by an
/// active-set search warm-started at the previous solution, with cyclic
/// coordinate descent as the fallback. At λ = 0 the path ends at
/// `1e-6·(σ² + ρ)·√m`.
pub fn fit_lasso(instance: &Instance, lambda: f64) -> Result<FitResult> {
    let end = if lambda == 0.0 {
        1e-6 * instance.cfg.signal_power() * (instance.m as f64).sqrt()
    } else {
        lambda
    };
    let data = &instance.design.as_slice()[..instance.m * instance.p];
    fit_lasso_raw(data, instance.m, instance.p, instance.y.as_slice(), lambda, end)
}

pub(crate) fn fit_lasso_raw(data: &[f64], m: usize, p: usize, y: &[f64], lambda: f64, end: f64) -> Result<FitResult> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lasso needs lambda >= 0, got {lambda}")));
    }
    let x = Design::new(data, m, p);
    let xty: Vec<f64> = (0..p).map(|j| x.dot(j, y)).collect();
    let mut gram = GramFactor::new();
    let lambda_max = xty.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut beta = vec![0.0; p];
    let mut iterations = 0;
    if end < lambda_max {
        let start = if lambda == 0.0 { 0.5 * lambda_max } else { lambda_max };
        let ratio = (end / start).powf(1.0 / (STAGES - 1) as f64);
        for k in 0..STAGES {
            let stage = if k == STAGES - 1 { end } else { start * ratio.powi(k as i32) };
            if stage >= lambda_max {
                continue;
            }
            iterations += lasso_stage(&x, y, &xty, stage, &mut gram, &mut beta)?;
        }
    }
    let objective = objective_l1(&x, y, end, &beta);
    Ok(FitResult {
        beta_hat: DVector::from_vec(beta),
        iterations,
        objective,
        converged: true,
    })
}

/// Normalized training error and analytic generalization error of a fit.
pub fn empirical_risk(instance: &Instance, fit: &FitResult, cfg: &ModelConfig) -> RiskPoint {
    let (n, m, p) = (instance.n, instance.m, instance.p);
    let norm = cfg.signal_power();
    let resid = &instance.y - instance.inference_design() * &fit.beta_hat;
    let te = resid.norm_squared() / (m as f64 * norm);
    let mut err = 0.0;
    for j in 0..n.min(p) {
        err += (instance.beta[j] - fit.beta_hat[j]).powi(2);
    }
    for j in p..n {
        err += instance.beta[j].powi(2);
    }
    for j in n..p {
        err += fit.beta_hat[j].powi(2);
    }
    let ge = (cfg.sigma * cfg.sigma + err / n as f64) / norm;
    RiskPoint::new(te, ge)
}
