//! Library-side equivalent of `mispar sweep` followed by `mispar render`:
//! a μ sweep written as CSV, read back, and drawn as SVG.

use mispar::cli::{parse_grid, render_svg, sweep, Axis, Output, PlotSpec, SweepSpec, Table};
use mispar::ModelConfig;

fn main() -> mispar::Result<()> {
    let fixed = ModelConfig::new(0.8, 1.0, 0.2, 0.1, 0.0)?;
    let mut spec = SweepSpec::new(Axis::Mu, parse_grid("0.05:4:80")?, fixed, vec![Output::GeL2, Output::GeL1]);
    spec.include_singularity = true;
    let report = sweep(&spec)?;

    let dir = std::env::temp_dir();
    let csv_path = dir.join("mispar_sweep.csv");
    let svg_path = dir.join("mispar_sweep.svg");
    report.table.write_csv(std::fs::File::create(&csv_path)?)?;

    let table = Table::read_csv(std::fs::File::open(&csv_path)?)?;
    let mut plot = PlotSpec::new("mu", &["ge_l2", "ge_l1"]);
    plot.log_y = true;
    plot.title = Some("interpolating GE".into());
    std::fs::write(&svg_path, render_svg(&table, &plot)?)?;
    println!("{} rows -> {}", table.rows.len(), csv_path.display());
    println!("plot -> {}", svg_path.display());
    Ok(())
}
