//! Ridge TE and GE across overparametrization: the λ → 0 double-descent
//! curve with its μ = 1 divergence, a regularized curve, and the spectral
//! oracle next to the closed form.

use mispar::ridge::{ridge_risk, risk_l2_oracle};
use mispar::ModelConfig;

fn main() -> mispar::Result<()> {
    let base = ModelConfig::new(0.8, 1.0, 0.2, 0.1, 0.0)?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "mu", "te(0)", "ge(0)", "ge(0.1)", "oracle");
    for mu in [0.25, 0.5, 0.8, 0.95, 1.0, 1.05, 1.25, 2.0, 4.0, 16.0] {
        let interp = ridge_risk(&base.with_mu(mu))?;
        let reg = base.with_mu(mu).with_lambda(0.1);
        let closed = ridge_risk(&reg)?;
        let oracle = risk_l2_oracle(&reg)?;
        println!(
            "{mu:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            interp.te, interp.ge, closed.ge, oracle.ge
        );
    }
    Ok(())
}
