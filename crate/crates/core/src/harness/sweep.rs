use std::fmt;

use rayon::prelude::*;
use serde::Deserialize;

use super::config::SweepConfig;
use super::output::quantize_sig9;
use crate::an::Scheme1Options;
use crate::capacity::{
    c_ce_eve, c_ce_lower_mc, c_eve_closed, c_mf, c_sec_ce, c_sec_mf, scheme1_estimate,
    scheme2_estimate, secrecy_mf_an_opt, Scheme2Options, SystemParams,
};
use crate::error::{Error, Result};

/// Environment variable holding the worker count; unset means automatic.
pub const WORKERS_ENV: &str = "CE_SECRECY_WORKERS";

/// Transmission schemes compared by a sweep, in output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// MF precoding, no AN (closed form).
    Mf,
    /// Per-antenna CE precoding, no AN.
    Ce,
    /// MF precoding with null-space AN and the best power split on a grid.
    MfAn,
    /// CE precoding with invisible AN.
    CeScheme1,
    /// CE precoding with random-phase AN and a cancellation antenna.
    CeScheme2,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::Mf, Scheme::Ce, Scheme::MfAn, Scheme::CeScheme1, Scheme::CeScheme2];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Mf => "mf",
            Scheme::Ce => "ce",
            Scheme::MfAn => "mf_an",
            Scheme::CeScheme1 => "ce_scheme1",
            Scheme::CeScheme2 => "ce_scheme2",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.tag() == tag)
    }

    pub(crate) fn valid_tags() -> String {
        Self::ALL.map(Scheme::tag).join(", ")
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One `(scheme, n_t, snr)` cell of a sweep. Numeric fields hold at most
/// nine significant digits so they survive a CSV round trip unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub scheme: Scheme,
    pub n_t: usize,
    pub snr_db: f64,
    pub secrecy_bits: f64,
    pub user_bits: f64,
    pub eve_bits: f64,
    pub std_error: f64,
    pub trials: usize,
    /// `key=value` diagnostics separated by `;`, possibly empty.
    pub flags: String,
}

#[derive(Clone, Debug)]
pub struct CellFailure {
    pub scheme: Scheme,
    pub n_t: usize,
    pub snr_db: f64,
    pub error: String,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    /// Successful cells sorted by `(scheme, n_t, snr_db)`.
    pub rows: Vec<ResultRow>,
    pub failures: Vec<CellFailure>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one sweep cell: SplitMix64 chained over the master seed, the
/// FNV-1a hash of the scheme tag, `n_t`, and the bit pattern of `snr_db`.
///
/// Depends only on the cell's own coordinates, so editing the grid leaves
/// every other cell's draws unchanged.
pub fn cell_seed(master_seed: u64, scheme: Scheme, n_t: usize, snr_db: f64) -> u64 {
    let snr_bits = if snr_db == 0.0 { 0 } else { snr_db.to_bits() };
    let mut s = splitmix64(master_seed);
    s = splitmix64(s ^ fnv1a(scheme.tag().as_bytes()));
    s = splitmix64(s ^ n_t as u64);
    splitmix64(s ^ snr_bits)
}

fn flags(pairs: &[(&str, f64)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={}", super::output::fmt_sig9(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Evaluates a single cell.
pub fn run_cell(cfg: &SweepConfig, scheme: Scheme, n_t: usize, snr_db: f64) -> Result<ResultRow> {
    let p = SystemParams::from_snr_db(n_t, snr_db)?;
    let seed = cell_seed(cfg.master_seed, scheme, n_t, snr_db);
    let trials = cfg.trials;
    let (secrecy, user, eve, std_error, trials, flag_text) = match scheme {
        Scheme::Mf => {
            let s = c_sec_mf(&p)?;
            (s.value, c_mf(&p)?.value, c_eve_closed(&p)?.value, 0.0, 0, String::new())
        }
        Scheme::Ce => {
            let s = c_sec_ce(&p, trials, seed)?;
            let u = c_ce_lower_mc(&p, trials, seed)?;
            (s.value, u.value, c_ce_eve(&p)?.value, s.std_error, trials, String::new())
        }
        Scheme::MfAn => {
            let est = secrecy_mf_an_opt(&p, &cfg.mf_an.eta_grid, trials, seed)?;
            (
                est.best.value,
                est.user.value,
                est.eve.value,
                est.best.std_error,
                trials,
                flags(&[("best_eta", est.best_eta)]),
            )
        }
        Scheme::CeScheme1 => {
            let s1 = &cfg.scheme1;
            let base = match s1.an_power_target {
                Some(t) => Scheme1Options::with_target(t),
                None => Scheme1Options::from_eta(cfg.eta, n_t)?,
            };
            let opts = Scheme1Options {
                penalty_weight: s1.penalty_weight,
                tolerance: s1.tolerance,
                max_iters: s1.max_iters,
                max_restarts: s1.max_restarts,
                ..base
            };
            let est = scheme1_estimate(&p, &opts, trials, seed)?;
            (
                est.empirical.value,
                est.user.value,
                est.eve_empirical.value,
                est.empirical.std_error,
                trials,
                flags(&[
                    ("trivial_secrecy", est.trivial.value),
                    ("solver_fail_rate", est.solver_failure_rate),
                    ("an_power", est.mean_an_power),
                ]),
            )
        }
        Scheme::CeScheme2 => {
            let opts = Scheme2Options {
                split: cfg.scheme2.split,
                leakage_phase: cfg.scheme2.leakage_phase,
                h0_floor: cfg.scheme2.h0_floor,
                ..Scheme2Options::default()
            };
            let est = scheme2_estimate(&p, &opts, trials, seed)?;
            (
                est.secrecy.value,
                est.user.value,
                est.eve.value,
                est.secrecy.std_error,
                trials,
                flags(&[
                    ("low_h0_rate", est.low_cancel_gain_rate),
                    ("cancel_power_median", est.median_cancel_power),
                ]),
            )
        }
    };
    Ok(ResultRow {
        scheme,
        n_t,
        snr_db,
        secrecy_bits: quantize_sig9(secrecy.max(0.0)),
        user_bits: quantize_sig9(user),
        eve_bits: quantize_sig9(eve),
        std_error: quantize_sig9(std_error),
        trials,
        flags: flag_text,
    })
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
}

/// Runs every cell with the worker count from the environment.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    run_sweep_with_workers(cfg, workers_from_env())
}

/// Runs every cell on a pool of `workers` threads (`None`: one per core).
///
/// A failing cell is recorded in `failures` and the remaining cells still
/// run. Output does not depend on the worker count.
pub fn run_sweep_with_workers(cfg: &SweepConfig, workers: Option<usize>) -> Result<SweepOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Usage(format!("cannot build worker pool: {e}")))?;

    let mut schemes = cfg.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let mut cells = Vec::new();
    for &scheme in &schemes {
        let mut n_ts = cfg.n_t_grid.clone();
        n_ts.sort_unstable();
        n_ts.dedup();
        for n_t in n_ts {
            let mut snrs = cfg.snr_db_grid.clone();
            snrs.sort_by(f64::total_cmp);
            snrs.dedup();
            cells.extend(snrs.into_iter().map(|snr| (scheme, n_t, snr)));
        }
    }

    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(scheme, n_t, snr)| (scheme, n_t, snr, run_cell(cfg, scheme, n_t, snr)))
            .collect()
    });

    let mut outcome = SweepOutcome::default();
    for (scheme, n_t, snr_db, result) in results {
        match result {
            Ok(row) => outcome.rows.push(row),
            Err(e) => outcome.failures.push(CellFailure {
                scheme,
                n_t,
                snr_db,
                error: e.to_string(),
            }),
        }
    }
    Ok(outcome)
}
