//! Command-line front end and CSV/JSON/SVG writers.

mod cli;
mod svg;
mod table;

pub use cli::{audit_json, render, run_cli, Report, RunConfig};
pub use svg::{render_svg, Figure, Marker, Series};
pub use table::{format_float, rows_json, write_csv, write_json, Cell, Table};
