//! Noiseless recovery boundaries: α_c(ρ), and μ_c(ρ/α) from the exact
//! parametric form next to the small-ρ approximation.

use mispar::lasso::{alpha_c, mu_c, mu_c_approx};

fn main() -> mispar::Result<()> {
    println!("{:>5} {:>8} {:>8}", "rho", "alpha_c", "tau_c");
    for rho in [0.05, 0.1, 0.2, 0.3, 0.5, 0.8] {
        let b = alpha_c(rho)?;
        println!("{rho:>5} {:>8.4} {:>8.4}", b.alpha_c, b.tau_c);
    }

    let alpha = 0.8;
    println!("\n{:>9} {:>12} {:>12}", "rho/alpha", "mu_c", "approx");
    for rho in [0.02, 0.04, 0.08, 0.12, 0.2, 0.3] {
        let curve = mu_c(rho, alpha)?;
        println!("{:>9.3} {:>12.5e} {:>12.5e}", curve.rho_over_alpha, curve.mu_c, mu_c_approx(rho, alpha));
    }
    match mu_c(0.2, 0.4) {
        Err(e) => println!("\nrho=0.2, alpha=0.4: {e}"),
        Ok(c) => println!("\nrho=0.2, alpha=0.4: mu_c {}", c.mu_c),
    }
    Ok(())
}
