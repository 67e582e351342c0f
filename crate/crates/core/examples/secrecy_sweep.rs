//! Runs a sweep config and writes the CSV plus a gnuplot script, the same
//! thing `ce-secrecy sweep` does, with a per-cell summary on stdout.
//!
//!     cargo run --release --example secrecy_sweep -- crates/core/examples/configs/reference.toml
//!     gnuplot reference.gp

use ce_secrecy::harness::{emit_csv, emit_plot_script, load_config, run_sweep};

fn main() -> ce_secrecy::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/reference.toml").to_string());
    let cfg = load_config(&path)?;
    let outcome = run_sweep(&cfg)?;
    for r in &outcome.rows {
        println!("{:<10} N_t={:<4} {:>5} dB  secrecy {:>7.3}  user {:>7.3}  eve {:>7.3}  {}", r.scheme.tag(), r.n_t, r.snr_db, r.secrecy_bits, r.user_bits, r.eve_bits, r.flags);
    }
    for f in &outcome.failures {
        eprintln!("{} N_t={} {} dB failed: {}", f.scheme, f.n_t, f.snr_db, f.error);
    }
    emit_csv(&outcome.rows, &cfg.output_path)?;
    emit_plot_script(&outcome.rows, cfg.output_path.with_extension("gp"))?;
    println!("wrote {}", cfg.output_path.display());
    Ok(())
}
