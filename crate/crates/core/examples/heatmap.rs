//! The (μ, α) map of interpolating ridge GE at low noise, as a long-format
//! table and a heatmap. Good generalization starts at μα = 1.

use mispar::cli::{render_svg, sweep, Job, Recipe};

fn main() -> mispar::Result<()> {
    let Job::Sweep(spec) = Recipe::Fig3.job() else { unreachable!() };
    let table = sweep(&spec)?.table;
    let (mu, alpha, ge) = (table.numeric("mu")?, table.numeric("alpha")?, table.numeric("ge_l2")?);
    for a in [1.2, 1.5, 2.0, 3.0] {
        let onset = (0..mu.len()).find(|&i| alpha[i] == a && ge[i] < 0.1).map(|i| mu[i]);
        println!("alpha={a}: GE below 0.1 from mu={onset:?} (1/alpha = {:.3})", 1.0 / a);
    }
    let path = std::env::temp_dir().join("mispar_heatmap.svg");
    std::fs::write(&path, render_svg(&table, &Recipe::Fig3.plot())?)?;
    println!("heatmap -> {}", path.display());
    Ok(())
}
