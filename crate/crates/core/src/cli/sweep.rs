use super::table::{Cell, Table};
use crate::error::{Error, Result};
use crate::lasso::{self as phase, lasso_risk};
use crate::model::{ModelConfig, RiskPoint};
use crate::ridge::ridge_risk;
use crate::simulator::{run_trials, Penalty, TrialSummary};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Mu,
    Alpha,
    Lambda,
    Rho,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Mu => "mu",
            Axis::Alpha => "alpha",
            Axis::Lambda => "lambda",
            Axis::Rho => "rho",
        }
    }

    pub fn apply(self, cfg: ModelConfig, v: f64) -> ModelConfig {
        match self {
            Axis::Mu => cfg.with_mu(v),
            Axis::Alpha => cfg.with_alpha(v),
            Axis::Lambda => cfg.with_lambda(v),
            Axis::Rho => cfg.with_rho(v),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu" => Ok(Axis::Mu),
            "alpha" => Ok(Axis::Alpha),
            "lambda" => Ok(Axis::Lambda),
            "rho" => Ok(Axis::Rho),
            _ => Err(Error::Usage(format!("unknown axis `{s}` (mu, alpha, lambda, rho)"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Output {
    TeL2,
    GeL2,
    TeL1,
    GeL1,
    SimL2,
    SimL1,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::TeL2 => "te_l2",
            Output::GeL2 => "ge_l2",
            Output::TeL1 => "te_l1",
            Output::GeL1 => "ge_l1",
            Output::SimL2 => "sim_l2",
            Output::SimL1 => "sim_l1",
        }
    }

    /// CSV columns written for this output.
    pub fn columns(self) -> Vec<String> {
        match self {
            Output::SimL2 | Output::SimL1 => ["te", "te_se", "ge", "ge_se"]
                .iter()
                .map(|q| format!("{}_{q}", self.name()))
                .collect(),
            _ => vec![self.name().to_string()],
        }
    }

    /// Parses a comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<Output>> {
        let mut out: Vec<Output> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let o = part.parse()?;
            if !out.contains(&o) {
                out.push(o);
            }
        }
        if out.is_empty() {
            return Err(Error::Usage("no outputs requested".into()));
        }
        Ok(out)
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "te_l2" => Ok(Output::TeL2),
            "ge_l2" => Ok(Output::GeL2),
            "te_l1" => Ok(Output::TeL1),
            "ge_l1" => Ok(Output::GeL1),
            "sim_l2" => Ok(Output::SimL2),
            "sim_l1" => Ok(Output::SimL1),
            _ => Err(Error::Usage(format!(
                "unknown output `{s}` (te_l2, ge_l2, te_l1, ge_l1, sim_l2, sim_l1)"
            ))),
        }
    }
}

/// Grid syntax: `a:b:N` (N evenly spaced points, ends included),
/// `a:b:N:log` (geometric), or a comma-separated list. Generated values are
/// rounded to 12 significant digits so that e.g. μ = 1 is hit exactly.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Usage(format!("bad grid `{s}`: expected a:b:N, a:b:N:log or v1,v2,..."));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let (log, parts) = match parts.as_slice() {
            [a, b, n] => (false, [*a, *b, *n]),
            [a, b, n, "log"] => (true, [*a, *b, *n]),
            _ => return Err(bad()),
        };
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !a.is_finite() || !b.is_finite() || (log && !(a > 0.0 && b > 0.0)) {
            return Err(bad());
        }
        let at = |i: usize| {
            if n == 1 {
                return a;
            }
            let t = i as f64 / (n - 1) as f64;
            let v = if log { a * (b / a).powf(t) } else { a + (b - a) * t };
            round_sig(v)
        };
        return Ok((0..n).map(at).collect());
    }
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn round_sig(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn check_increasing(axis: Axis, grid: &[f64]) -> Result<()> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage(format!("{axis} grid must be strictly increasing")));
    }
    Ok(())
}

/// A one- or two-axis parameter sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub grid: Vec<f64>,
    /// Second axis for long-format two-dimensional grids (outer loop).
    pub second: Option<(Axis, Vec<f64>)>,
    /// Values of every knob not being swept.
    pub fixed: ModelConfig,
    pub outputs: Vec<Output>,
    pub sim_n: usize,
    pub sim_trials: usize,
    pub seed: u64,
    /// Keep μ = 1 in μ grids (λ = 0 gives `inf`).
    pub include_singularity: bool,
}

impl SweepSpec {
    pub fn new(axis: Axis, grid: Vec<f64>, fixed: ModelConfig, outputs: Vec<Output>) -> Self {
        Self {
            axis,
            grid,
            second: None,
            fixed,
            outputs,
            sim_n: 200,
            sim_trials: 100,
            seed: 42,
            include_singularity: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_increasing(self.axis, &self.grid)?;
        if let Some((axis, grid)) = &self.second {
            if *axis == self.axis {
                return Err(Error::Usage("the two sweep axes must differ".into()));
            }
            check_increasing(*axis, grid)?;
        }
        if self.outputs.is_empty() {
            return Err(Error::Usage("no outputs requested".into()));
        }
        let simulates = self.outputs.iter().any(|o| matches!(o, Output::SimL1 | Output::SimL2));
        if simulates && (self.sim_n == 0 || self.sim_trials == 0) {
            return Err(Error::Usage("simulation needs n >= 1 and trials >= 1".into()));
        }
        for (_, cfg) in self.points() {
            cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
        }
        Ok(())
    }

    fn keeps(&self, axis: Axis, v: f64) -> bool {
        self.include_singularity || axis != Axis::Mu || v != 1.0
    }

    /// Axis values and configurations in output order.
    pub fn points(&self) -> Vec<(Vec<f64>, ModelConfig)> {
        let inner: Vec<f64> = self.grid.iter().copied().filter(|v| self.keeps(self.axis, *v)).collect();
        match &self.second {
            None => inner
                .iter()
                .map(|&v| (vec![v], self.axis.apply(self.fixed, v)))
                .collect(),
            Some((axis2, grid2)) => grid2
                .iter()
                .filter(|w| self.keeps(*axis2, **w))
                .flat_map(|&w| {
                    let outer = axis2.apply(self.fixed, w);
                    inner.iter().map(move |&v| (vec![v, w], self.axis.apply(outer, v)))
                })
                .collect(),
        }
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec![self.axis.name().to_string()];
        if let Some((axis2, _)) = &self.second {
            cols.push(axis2.name().to_string());
        }
        for o in &self.outputs {
            cols.extend(o.columns());
        }
        cols
    }
}

/// A finished table plus per-point failure bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub table: Table,
    pub points: usize,
    pub failed: usize,
    pub warnings: Vec<String>,
}

impl SweepReport {
    /// More than 10% of the points failed.
    pub fn partial_failure(&self) -> bool {
        self.failed * 10 > self.points
    }
}

fn describe(values: &[f64], spec: &SweepSpec) -> String {
    let mut names = vec![spec.axis.name()];
    if let Some((a, _)) = &spec.second {
        names.push(a.name());
    }
    names
        .iter()
        .zip(values)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn sim_cells(s: &Result<TrialSummary>) -> Vec<Cell> {
    match s {
        Ok(s) => vec![s.te_mean, s.te_stderr, s.ge_mean, s.ge_stderr],
        Err(_) => vec![f64::NAN; 4],
    }
    .into_iter()
    .map(Cell::Num)
    .collect()
}

fn point_row(spec: &SweepSpec, values: &[f64], cfg: &ModelConfig) -> (Vec<Cell>, Vec<String>) {
    let wants = |o: &[Output]| spec.outputs.iter().any(|x| o.contains(x));
    let l2: Option<Result<RiskPoint>> = wants(&[Output::TeL2, Output::GeL2]).then(|| ridge_risk(cfg));
    let l1: Option<Result<RiskPoint>> =
        wants(&[Output::TeL1, Output::GeL1]).then(|| lasso_risk(cfg).map(|(risk, _)| risk));
    let mut errors = Vec::new();
    let mut row: Vec<Cell> = values.iter().map(|v| Cell::Num(*v)).collect();
    let theory = |r: &Option<Result<RiskPoint>>, pick: fn(&RiskPoint) -> f64| match r {
        Some(Ok(p)) => pick(p),
        _ => f64::NAN,
    };
    for o in &spec.outputs {
        match o {
            Output::TeL2 => row.push(theory(&l2, |p| p.te).into()),
            Output::GeL2 => row.push(theory(&l2, |p| p.ge).into()),
            Output::TeL1 => row.push(theory(&l1, |p| p.te).into()),
            Output::GeL1 => row.push(theory(&l1, |p| p.ge).into()),
            Output::SimL2 | Output::SimL1 => {
                let penalty = if *o == Output::SimL2 { Penalty::L2 } else { Penalty::L1 };
                let s = run_trials(cfg, spec.sim_n, spec.sim_trials, penalty, spec.seed);
                if let Err(e) = &s {
                    errors.push(format!("{}: {e}", o.name()));
                }
                row.extend(sim_cells(&s));
            }
        }
    }
    for (name, r) in [("l2 theory", &l2), ("l1 theory", &l1)] {
        if let Some(Err(e)) = r {
            errors.push(format!("{name}: {e}"));
        }
    }
    let warnings = errors
        .into_iter()
        .map(|e| format!("{}: {e}", describe(values, spec)))
        .collect();
    (row, warnings)
}

/// Evaluates every grid point in parallel and assembles rows in grid
/// order. Solver failures become `nan` cells plus a warning.
pub fn sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let points = spec.points();
    let results: Vec<(Vec<Cell>, Vec<String>)> = points
        .par_iter()
        .map(|(values, cfg)| point_row(spec, values, cfg))
        .collect();
    let mut table = Table::new(spec.columns());
    let mut warnings = Vec::new();
    let mut failed = 0;
    for (row, w) in results {
        if !w.is_empty() {
            failed += 1;
        }
        warnings.extend(w);
        table.push(row);
    }
    Ok(SweepReport {
        table,
        points: points.len(),
        failed,
        warnings,
    })
}

/// Critical overparametrization along a ρ grid at fixed α.
pub fn phase_table(rho_grid: &[f64], alpha: f64) -> Result<SweepReport> {
    if let Some(bad) = rho_grid.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::Usage(format!("rho values must lie in (0, 1), got {bad}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Usage(format!("alpha must be positive, got {alpha}")));
    }
    check_increasing(Axis::Rho, rho_grid)?;
    let rows: Vec<(Vec<Cell>, Option<String>)> = rho_grid
        .par_iter()
        .map(|&rho| {
            let mut row: Vec<Cell> = vec![rho.into(), (rho / alpha).into()];
            let boundary = phase::alpha_c(rho);
            let exact = phase::mu_c(rho, alpha);
            let (status, warning) = match (&boundary, &exact) {
                (Ok(_), Ok(_)) => ("ok", None),
                (Ok(_), Err(Error::NoWindow { .. })) => ("no_window", None),
                (Err(e), _) | (_, Err(e)) => ("failed", Some(format!("rho={rho}: {e}"))),
            };
            let (mu_c, approx) = match &exact {
                Ok(c) => (c.mu_c, phase::mu_c_approx(rho, alpha)),
                Err(_) => (f64::NAN, f64::NAN),
            };
            row.push(mu_c.into());
            row.push(approx.into());
            row.push(boundary.map(|b| b.alpha_c).unwrap_or(f64::NAN).into());
            row.push(status.into());
            (row, warning)
        })
        .collect();
    let mut table = Table::new(["rho", "rho_over_alpha", "mu_c_exact", "mu_c_approx", "alpha_c", "status"]);
    let mut warnings = Vec::new();
    for (row, w) in rows {
        warnings.extend(w);
        table.push(row);
    }
    Ok(SweepReport {
        points: table.rows.len(),
        failed: warnings.len(),
        table,
        warnings,
    })
}
