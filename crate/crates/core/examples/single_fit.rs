//! One sampled instance: ridge and lasso fits, the lasso KKT residual, and
//! the empirical TE/GE next to theory.

use mispar::lasso::lasso_risk;
use mispar::model::sample_instance;
use mispar::ridge::risk_l2_interp;
use mispar::simulator::{empirical_risk, fit_lasso, fit_ridge};
use mispar::ModelConfig;

fn main() -> mispar::Result<()> {
    let cfg = ModelConfig::new(0.8, 2.0, 0.2, 0.1, 0.0)?;
    let inst = sample_instance(&cfg, 400, 7)?;
    println!("n={} m={} p={}", inst.n, inst.m, inst.p);

    let ridge = fit_ridge(&inst, 0.0)?;
    let lasso = fit_lasso(&inst, 0.0)?;
    let x = inst.inference_design();
    let grad = x.transpose() * (&inst.y - x * &lasso.beta_hat);
    let nonzero = lasso.beta_hat.iter().filter(|b| **b != 0.0).count();
    println!(
        "lasso: {} iterations, {nonzero} nonzero, max |X'r| = {:.2e}",
        lasso.iterations,
        grad.amax()
    );

    let r2 = empirical_risk(&inst, &ridge, &cfg);
    let r1 = empirical_risk(&inst, &lasso, &cfg);
    println!("ridge  te={:.3e} ge={:.4}  theory ge={:.4}", r2.te, r2.ge, risk_l2_interp(&cfg).ge);
    println!("lasso  te={:.3e} ge={:.4}  theory ge={:.4}", r1.te, r1.ge, lasso_risk(&cfg)?.0.ge);
    Ok(())
}
