//! Simulated means ± stderr over independent designs
//! beside the theory curves. The run is deterministic in the seed.

use mispar::lasso::lasso_risk;
use mispar::ridge::risk_l2_interp;
use mispar::simulator::{run_trials, Penalty};
use mispar::ModelConfig;

fn main() -> mispar::Result<()> {
    let base = ModelConfig::new(0.8, 1.0, 0.2, 0.1, 0.0)?;
    let (n, trials, seed) = (200, 20, 1);
    println!("{:>5} {:>8} {:>16} {:>8} {:>16}", "mu", "ge_l2", "sim", "ge_l1", "sim");
    for mu in [0.3, 0.6, 1.5, 2.0, 3.0] {
        let cfg = base.with_mu(mu);
        let l2 = run_trials(&cfg, n, trials, Penalty::L2, seed)?;
        let l1 = run_trials(&cfg, n, trials, Penalty::L1, seed)?;
        println!(
            "{mu:>5} {:>8.4} {:>8.4} ± {:<5.3} {:>8.4} {:>8.4} ± {:<5.3}",
            risk_l2_interp(&cfg).ge,
            l2.ge_mean,
            l2.ge_stderr,
            lasso_risk(&cfg)?.0.ge,
            l1.ge_mean,
            l1.ge_stderr
        );
    }
    Ok(())
}
