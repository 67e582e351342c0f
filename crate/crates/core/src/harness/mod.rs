//! Seeded capacity sweeps over schemes, array sizes and SNR, with CSV and
//! gnuplot output.

mod config;
mod output;
mod sweep;

pub use config::{load_config, parse_config, MfAnConfig, Scheme1Config, Scheme2Config, SweepConfig};
pub use output::{
    emit_csv, emit_plot_script, fmt_sig9, parse_csv, plot_script, quantize_sig9, read_csv,
    write_csv, CSV_HEADER,
};
pub use sweep::{
    cell_seed, run_cell, run_sweep, run_sweep_with_workers, workers_from_env, CellFailure,
    ResultRow, Scheme, SweepOutcome, WORKERS_ENV,
};
