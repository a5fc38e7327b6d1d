use clap::{Args, Parser, Subcommand};
use mispar::cli::{
    parse_grid, phase_table, render_svg, sweep, Axis, Job, Output, PlotSpec, Recipe, SweepReport, SweepSpec, Table,
};
use mispar::{Error, ModelConfig};
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Risk curves for misparametrized sparse regression.
#[derive(Parser)]
#[command(name = "mispar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theory and simulation over a parameter grid, as CSV.
    Sweep(SweepArgs),
    /// Critical overparametrization along a rho grid, as CSV.
    Phase(PhaseArgs),
    /// Static SVG from a CSV table.
    Render(RenderArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Preset pinning every parameter of a figure (fig1, fig2, fig3, fig4).
    #[arg(long)]
    recipe: Option<String>,
    #[arg(long)]
    axis: Option<String>,
    /// a:b:N, a:b:N:log or a comma-separated list.
    #[arg(long)]
    grid: Option<String>,
    /// Second (outer) axis for a long-format 2-D grid.
    #[arg(long)]
    axis2: Option<String>,
    #[arg(long)]
    grid2: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Comma-separated subset of te_l2, ge_l2, te_l1, ge_l1, sim_l2, sim_l1.
    #[arg(long)]
    outputs: Option<String>,
    /// Generative dimension of simulated instances.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Keep mu = 1 in mu grids.
    #[arg(long)]
    include_singularity: bool,
    /// CSV destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the table to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long)]
    recipe: Option<String>,
    /// Grid of rho values in (0, 1).
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Plot preset; explicit options below override it.
    #[arg(long)]
    recipe: Option<String>,
    #[arg(long)]
    x: Option<String>,
    /// Comma-separated line columns (the y axis column in heatmap mode).
    #[arg(long)]
    y: Option<String>,
    /// Comma-separated columns drawn with `<name>_se` error bars.
    #[arg(long)]
    errbars: Option<String>,
    /// Heatmap color column.
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    logx: bool,
    #[arg(long)]
    logy: bool,
    #[arg(long)]
    logz: bool,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

fn recipe(name: &Option<String>) -> Result<Option<Recipe>, Error> {
    name.as_deref().map(str::parse).transpose()
}

fn write_output(path: &Option<PathBuf>, body: &[u8]) -> Result<(), Error> {
    match path {
        Some(p) => File::create(p)?.write_all(body)?,
        None => io::stdout().lock().write_all(body)?,
    }
    Ok(())
}

fn finish(report: SweepReport, out: &Option<PathBuf>, svg: &Option<PathBuf>, plot: PlotSpec) -> Result<ExitCode, Error> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_output(out, report.table.to_csv_string().as_bytes())?;
    if let Some(path) = svg {
        File::create(path)?.write_all(render_svg(&report.table, &plot)?.as_bytes())?;
    }
    if report.partial_failure() {
        eprintln!("error: {} of {} points failed", report.failed, report.points);
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn default_plot(spec: &SweepSpec) -> PlotSpec {
    let columns = spec.columns();
    let lines: Vec<&str> = columns
        .iter()
        .skip(1)
        .filter(|c| !c.starts_with("sim_"))
        .map(String::as_str)
        .collect();
    let mut plot = PlotSpec::new(spec.axis.name(), &lines);
    plot.errbars = spec
        .outputs
        .iter()
        .filter(|o| matches!(o, Output::SimL2 | Output::SimL1))
        .map(|o| o.name().to_string())
        .collect();
    plot
}

fn run_phase(rho: &[f64], alpha: f64, out: &Option<PathBuf>, svg: &Option<PathBuf>) -> Result<ExitCode, Error> {
    let report = phase_table(rho, alpha)?;
    finish(report, out, svg, Recipe::Fig4.plot())
}

fn run_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let preset = recipe(&args.recipe)?;
    let mut spec = match preset.map(Recipe::job) {
        Some(Job::Phase { rho, alpha }) => return run_phase(&rho, args.alpha.unwrap_or(alpha), &args.out, &args.svg),
        Some(Job::Sweep(spec)) => spec,
        None => {
            let grid = args
                .grid
                .as_deref()
                .ok_or_else(|| Error::Usage("--grid is required without --recipe".into()))?;
            let fixed = ModelConfig {
                alpha: 0.8,
                mu: 1.0,
                rho: 0.2,
                sigma: 0.1,
                lambda: 0.0,
            };
            SweepSpec::new(Axis::Mu, parse_grid(grid)?, fixed, vec![Output::GeL2, Output::GeL1])
        }
    };
    if let Some(a) = &args.axis {
        spec.axis = a.parse()?;
    }
    if let Some(g) = &args.grid {
        spec.grid = parse_grid(g)?;
    }
    match (&args.axis2, &args.grid2) {
        (Some(a), Some(g)) => spec.second = Some((a.parse()?, parse_grid(g)?)),
        (None, None) => {}
        _ => return Err(Error::Usage("--axis2 and --grid2 go together".into())),
    }
    let f = &mut spec.fixed;
    for (slot, value) in [
        (&mut f.alpha, args.alpha),
        (&mut f.mu, args.mu),
        (&mut f.rho, args.rho),
        (&mut f.sigma, args.sigma),
        (&mut f.lambda, args.lambda),
    ] {
        if let Some(v) = value {
            *slot = v;
        }
    }
    if let Some(o) = &args.outputs {
        spec.outputs = Output::parse_list(o)?;
    }
    spec.sim_n = args.n.unwrap_or(spec.sim_n);
    spec.sim_trials = args.trials.unwrap_or(spec.sim_trials);
    spec.seed = args.seed.unwrap_or(spec.seed);
    spec.include_singularity |= args.include_singularity;
    let plot = match preset {
        Some(r) if r != Recipe::Fig4 => r.plot(),
        _ => default_plot(&spec),
    };
    let on_mu = |axis: Axis, grid: &[f64]| axis == Axis::Mu && grid.contains(&1.0);
    let drops_one =
        on_mu(spec.axis, &spec.grid) || spec.second.as_ref().is_some_and(|(a, g)| on_mu(*a, g));
    if drops_one && !spec.include_singularity {
        eprintln!("note: mu = 1 left out of the grid (pass --include-singularity to keep it)");
    }
    let report = sweep(&spec)?;
    finish(report, &args.out, &args.svg, plot)
}

fn run_phase_args(args: PhaseArgs) -> Result<ExitCode, Error> {
    let (mut rho, mut alpha) = match recipe(&args.recipe)?.map(Recipe::job) {
        Some(Job::Phase { rho, alpha }) => (rho, alpha),
        Some(Job::Sweep(_)) => return Err(Error::Usage("phase takes --recipe fig4".into())),
        None => (Vec::new(), 0.8),
    };
    if let Some(g) = &args.rho {
        rho = parse_grid(g)?;
    } else if args.recipe.is_none() {
        return Err(Error::Usage("--rho is required without --recipe".into()));
    }
    if let Some(a) = args.alpha {
        alpha = a;
    }
    run_phase(&rho, alpha, &args.out, &args.svg)
}

fn run_render(args: RenderArgs) -> Result<ExitCode, Error> {
    let table = Table::read_csv(BufReader::new(File::open(&args.input)?))?;
    let mut plot = match recipe(&args.recipe)? {
        Some(r) => r.plot(),
        None => {
            let x = args
                .x
                .as_deref()
                .ok_or_else(|| Error::Usage("--x is required without --recipe".into()))?;
            PlotSpec::new(x, &[])
        }
    };
    if let Some(x) = &args.x {
        plot.x = x.clone();
    }
    if let Some(y) = &args.y {
        plot.y = list(y);
    }
    if let Some(e) = &args.errbars {
        plot.errbars = list(e);
    }
    if let Some(z) = &args.z {
        plot.z = Some(z.clone());
    }
    plot.log_x |= args.logx;
    plot.log_y |= args.logy;
    plot.log_z |= args.logz;
    if args.title.is_some() {
        plot.title = args.title.clone();
    }
    if plot.y.is_empty() && plot.errbars.is_empty() {
        return Err(Error::Usage("nothing to draw: pass --y or --errbars".into()));
    }
    write_output(&args.out, render_svg(&table, &plot)?.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("MISPAR_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| Error::Usage(format!("MISPAR_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Sweep(args) => run_sweep(args),
        Command::Phase(args) => run_phase_args(args),
        Command::Render(args) => run_render(args),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
