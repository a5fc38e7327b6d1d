//! Sweeps, phase tables, CSV and SVG output behind the `mispar` binary.

mod recipes;
mod svg;
mod sweep;
mod table;

pub use recipes::{Job, Recipe};
pub use svg::{render_svg, PlotSpec};
pub use sweep::{parse_grid, phase_table, sweep, Axis, Output, SweepReport, SweepSpec};
pub use table::{format_number, parse_number, Cell, Table};
