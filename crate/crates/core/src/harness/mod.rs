//! Configuration, parameter sweeps and result emission for the `fas` CLI.

mod config;
mod csv_out;
mod plot;
mod sweep;
pub mod validate;

pub use config::{parse_config, SweepSpec};
pub use csv_out::{emit_csv, format_sig, read_csv, write_csv, CSV_HEADER};
pub use plot::{emit_plot, render_svg, PlotSummary};
pub use sweep::{fig1_spec, fig2_spec, run_sweep, ResultRow, FIGURE_SNR_DB};
