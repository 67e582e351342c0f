use std::path::PathBuf;
use std::process::ExitCode;

use ce_secrecy::capacity::{c_eve_closed, c_mf, c_sec_mf, SystemParams};
use ce_secrecy::check::run_checks;
use ce_secrecy::harness::{emit_csv, emit_plot_script, load_config, run_sweep};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ce-secrecy", version, about = "Constant-envelope precoding with artificial noise: secrecy-rate simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a TOML config; writes CSV and a gnuplot script.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form MF rates.
    ClosedForm {
        #[arg(long = "n-t")]
        n_t: usize,
        #[arg(long = "snr-db", allow_negative_numbers = true)]
        snr_db: f64,
    },
    /// Run the quick invariant suite.
    Check,
}

fn sweep(config: PathBuf, seed: Option<u64>, trials: Option<usize>, out: Option<PathBuf>) -> ExitCode {
    let mut cfg = match load_config(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(o) = out {
        cfg.output_path = o;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let outcome = match run_sweep(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for f in &outcome.failures {
        eprintln!("cell {} n_t={} snr_db={} failed: {}", f.scheme, f.n_t, f.snr_db, f.error);
    }
    if !outcome.rows.is_empty() {
        let plot = cfg.output_path.with_extension("gp");
        if let Err(e) = emit_csv(&outcome.rows, &cfg.output_path).and_then(|_| emit_plot_script(&outcome.rows, &plot)) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
        println!(
            "wrote {} rows to {} and plot script {}",
            outcome.rows.len(),
            cfg.output_path.display(),
            plot.display()
        );
    }
    if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn closed_form(n_t: usize, snr_db: f64) -> ExitCode {
    let run = || -> ce_secrecy::Result<()> {
        let p = SystemParams::from_snr_db(n_t, snr_db)?;
        println!("c_mf_bits={}", c_mf(&p)?.value);
        println!("c_eve_bits={}", c_eve_closed(&p)?.value);
        println!("c_sec_mf_bits={}", c_sec_mf(&p)?.value);
        Ok(())
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep { config, seed, trials, out } => sweep(config, seed, trials, out),
        Command::ClosedForm { n_t, snr_db } => closed_form(n_t, snr_db),
        Command::Check => {
            let results = run_checks();
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
