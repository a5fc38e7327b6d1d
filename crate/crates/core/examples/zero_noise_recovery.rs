//! Perfect recovery without noise: GE₁ vanishes on 1/α ≤ μ < μ_c and rises
//! quadratically past μ_c. A small simulated instance below μ_c recovers β
//! to solver precision.

use mispar::lasso::{lasso_risk, mu_c};
use mispar::simulator::{run_trial, Penalty};
use mispar::ModelConfig;

fn main() -> mispar::Result<()> {
    let (alpha, rho) = (0.8, 0.2);
    let mc = mu_c(rho, alpha)?.mu_c;
    println!("mu_c = {mc:.4}");
    let cfg = |mu| ModelConfig::new(alpha, mu, rho, 0.0, 0.0);
    for mu in [1.0, 1.25, 2.0, 4.0, mc - 1e-3, mc + 0.05, mc + 0.2, 10.0, 18.0] {
        let (point, state) = lasso_risk(&cfg(mu)?)?;
        println!("mu={mu:<8.4} ge_l1={:<12.4e} {:?}", point.ge, state.branch);
    }

    let point = run_trial(&cfg(2.0)?, 300, Penalty::L1, 1, 0)?;
    println!("simulated n=300, mu=2: ge_l1 = {:.2e}", point.ge);
    Ok(())
}
