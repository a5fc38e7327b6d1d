use super::svg::PlotSpec;
use super::sweep::{parse_grid, Axis, Output, SweepSpec};
use crate::error::{Error, Result};
use crate::model::ModelConfig;
use std::str::FromStr;

/// Named presets for the published figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// Theory and 100-trial simulation vs μ, α = 0.8, ρ = 0.2, σ = 0.1.
    Fig1,
    /// As `Fig1` with a single trial.
    Fig2,
    /// Interpolating ridge GE over the (μ, α) plane, ρ = 0.2, σ = 0.01.
    Fig3,
    /// Critical overparametrization against ρ/α.
    Fig4,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Sweep(SweepSpec),
    Phase { rho: Vec<f64>, alpha: f64 },
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Recipe::Fig1),
            "fig2" => Ok(Recipe::Fig2),
            "fig3" => Ok(Recipe::Fig3),
            "fig4" => Ok(Recipe::Fig4),
            _ => Err(Error::Usage(format!("unknown recipe `{s}` (fig1, fig2, fig3, fig4)"))),
        }
    }
}

fn grid(s: &str) -> Vec<f64> {
    parse_grid(s).expect("preset grids are well formed")
}

impl Recipe {
    pub fn job(self) -> Job {
        let base = ModelConfig {
            alpha: 0.8,
            mu: 1.0,
            rho: 0.2,
            sigma: 0.1,
            lambda: 0.0,
        };
        match self {
            Recipe::Fig1 | Recipe::Fig2 => {
                let outputs = vec![
                    Output::TeL2,
                    Output::GeL2,
                    Output::TeL1,
                    Output::GeL1,
                    Output::SimL2,
                    Output::SimL1,
                ];
                let mut spec = SweepSpec::new(Axis::Mu, grid("0.05:4:80"), base, outputs);
                spec.sim_n = 200;
                spec.sim_trials = if self == Recipe::Fig1 { 100 } else { 1 };
                spec.seed = 42;
                Job::Sweep(spec)
            }
            Recipe::Fig3 => {
                let fixed = ModelConfig { sigma: 0.01, ..base };
                let mut spec = SweepSpec::new(Axis::Mu, grid("0.05:4:80"), fixed, vec![Output::GeL2]);
                spec.second = Some((Axis::Alpha, grid("0.1:3:30")));
                spec.include_singularity = true;
                Job::Sweep(spec)
            }
            Recipe::Fig4 => Job::Phase {
                rho: grid("0.05:0.6:40"),
                alpha: 0.8,
            },
        }
    }

    pub fn plot(self) -> PlotSpec {
        match self {
            Recipe::Fig1 | Recipe::Fig2 => {
                let mut p = PlotSpec::new("mu", &["ge_l2", "ge_l1"]);
                p.errbars = vec!["sim_l2_ge".into(), "sim_l1_ge".into()];
                p.log_y = true;
                p.title = Some(format!(
                    "GE vs mu, alpha=0.8, rho=0.2, sigma=0.1, {} trial(s)",
                    if self == Recipe::Fig1 { 100 } else { 1 }
                ));
                p
            }
            Recipe::Fig3 => {
                let mut p = PlotSpec::new("mu", &["alpha"]);
                p.z = Some("ge_l2".into());
                p.log_z = true;
                p.title = Some("interpolating ridge GE, rho=0.2, sigma=0.01".into());
                p
            }
            Recipe::Fig4 => {
                let mut p = PlotSpec::new("rho_over_alpha", &["mu_c_exact", "mu_c_approx"]);
                p.log_y = true;
                p.title = Some("critical overparametrization mu_c".into());
                p
            }
        }
    }
}
