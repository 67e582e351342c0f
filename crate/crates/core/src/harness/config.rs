use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::sweep::Scheme;
use crate::an::DEFAULT_CANCEL_GAIN_FLOOR;
use crate::capacity::{EveSplit, LeakagePhase, DEFAULT_ETA_GRID};
use crate::error::{Error, Result};

/// A validated sweep description.
///
/// On disk this is a TOML file. Only `schemes` is required:
///
/// ```toml
/// schemes = ["mf", "ce", "mf_an", "ce_scheme2"]
/// snr_db_grid = [-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40]
/// n_t_grid = [100]
/// trials = 1000
/// master_seed = 0
/// eta = 0.5
/// output_path = "fig4.csv"
///
/// [mf_an]
/// eta_grid = [0.1, 0.3, 0.5, 0.7, 0.9]
///
/// [ce_scheme1]
/// tolerance = 1e-6
///
/// [ce_scheme2]
/// split = "upper"
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub schemes: Vec<Scheme>,
    pub snr_db_grid: Vec<f64>,
    pub n_t_grid: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    /// Information share of the power budget; sets the scheme I AN power target.
    pub eta: f64,
    pub mf_an: MfAnConfig,
    pub scheme1: Scheme1Config,
    pub scheme2: Scheme2Config,
    pub output_path: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MfAnConfig {
    pub eta_grid: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scheme1Config {
    /// Explicit `Σβ²` target; when absent it follows from `eta`.
    pub an_power_target: Option<f64>,
    pub penalty_weight: f64,
    pub tolerance: f64,
    pub max_iters: usize,
    pub max_restarts: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scheme2Config {
    pub split: EveSplit,
    pub leakage_phase: LeakagePhase,
    pub h0_floor: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schemes: Vec<Scheme>,
    snr_db_grid: Option<Vec<f64>>,
    n_t_grid: Option<Vec<usize>>,
    trials: Option<usize>,
    master_seed: Option<u64>,
    eta: Option<f64>,
    output_path: Option<PathBuf>,
    #[serde(default)]
    mf_an: RawMfAn,
    #[serde(default)]
    ce_scheme1: RawScheme1,
    #[serde(default)]
    ce_scheme2: RawScheme2,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawMfAn {
    eta_grid: Option<Vec<f64>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawScheme1 {
    an_power_target: Option<f64>,
    penalty_weight: Option<f64>,
    tolerance: Option<f64>,
    max_iters: Option<usize>,
    max_restarts: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawScheme2 {
    split: Option<RawSplit>,
    leakage_phase: Option<RawPhase>,
    h0_floor: Option<f64>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawSplit {
    Upper,
    Lower,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawPhase {
    An,
    Signal,
}

fn invalid(field: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("invalid `{field}`: {why}"))
}

/// `-10, -5, …, 40`.
fn default_snr_grid() -> Vec<f64> {
    (0..=10).map(|k| -10.0 + 5.0 * k as f64).collect()
}

/// Parses and validates a config from TOML text, applying defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let defaults = crate::an::Scheme1Options::default();
    let cfg = SweepConfig {
        schemes: raw.schemes,
        snr_db_grid: raw.snr_db_grid.unwrap_or_else(default_snr_grid),
        n_t_grid: raw.n_t_grid.unwrap_or_else(|| vec![100]),
        trials: raw.trials.unwrap_or(1000),
        master_seed: raw.master_seed.unwrap_or(0),
        eta: raw.eta.unwrap_or(0.5),
        mf_an: MfAnConfig {
            eta_grid: raw.mf_an.eta_grid.unwrap_or_else(|| DEFAULT_ETA_GRID.to_vec()),
        },
        scheme1: Scheme1Config {
            an_power_target: raw.ce_scheme1.an_power_target,
            penalty_weight: raw.ce_scheme1.penalty_weight.unwrap_or(defaults.penalty_weight),
            tolerance: raw.ce_scheme1.tolerance.unwrap_or(defaults.tolerance),
            max_iters: raw.ce_scheme1.max_iters.unwrap_or(defaults.max_iters),
            max_restarts: raw.ce_scheme1.max_restarts.unwrap_or(defaults.max_restarts),
        },
        scheme2: Scheme2Config {
            split: match raw.ce_scheme2.split {
                Some(RawSplit::Lower) => EveSplit::Lower,
                _ => EveSplit::Upper,
            },
            leakage_phase: match raw.ce_scheme2.leakage_phase {
                Some(RawPhase::Signal) => LeakagePhase::Signal,
                _ => LeakagePhase::An,
            },
            h0_floor: raw.ce_scheme2.h0_floor.unwrap_or(DEFAULT_CANCEL_GAIN_FLOOR),
        },
        output_path: raw.output_path.unwrap_or_else(|| PathBuf::from("results.csv")),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<SweepConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(invalid("schemes", format!("must not be empty; valid tags are {}", Scheme::valid_tags())));
        }
        if self.snr_db_grid.is_empty() {
            return Err(invalid("snr_db_grid", "must not be empty"));
        }
        if let Some(v) = self.snr_db_grid.iter().find(|v| !v.is_finite()) {
            return Err(invalid("snr_db_grid", format!("non-finite value {v}")));
        }
        if self.n_t_grid.is_empty() {
            return Err(invalid("n_t_grid", "must not be empty"));
        }
        if self.n_t_grid.contains(&0) {
            return Err(invalid("n_t_grid", "antenna counts must be at least 1"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(invalid("eta", format!("must be in (0, 1], got {}", self.eta)));
        }
        if self.mf_an.eta_grid.is_empty() {
            return Err(invalid("mf_an.eta_grid", "must not be empty"));
        }
        if let Some(v) = self.mf_an.eta_grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid("mf_an.eta_grid", format!("value {v} outside [0, 1]")));
        }
        let s1 = &self.scheme1;
        if !(s1.tolerance > 0.0) {
            return Err(invalid("ce_scheme1.tolerance", "must be positive"));
        }
        if !(s1.penalty_weight > 0.0) {
            return Err(invalid("ce_scheme1.penalty_weight", "must be positive"));
        }
        if let Some(t) = s1.an_power_target {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid("ce_scheme1.an_power_target", "must be finite and non-negative"));
            }
        }
        if !(self.scheme2.h0_floor >= 0.0) {
            return Err(invalid("ce_scheme2.h0_floor", "must be non-negative"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("schemes = [\"ce\"]").unwrap();
        assert_eq!(cfg.schemes, vec![Scheme::Ce]);
        assert_eq!(cfg.trials, 1000);
        assert_eq!(cfg.master_seed, 0);
        assert_eq!(cfg.eta, 0.5);
        assert_eq!(cfg.n_t_grid, vec![100]);
        assert_eq!(cfg.snr_db_grid, vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
        assert_eq!(cfg.mf_an.eta_grid.len(), 19);
        assert_eq!(cfg.scheme2.split, EveSplit::Upper);
    }

    #[test]
    fn zero_trials_rejected() {
        let err = parse_config("schemes = [\"ce\"]\ntrials = 0").unwrap_err().to_string();
        assert!(err.contains("trials"), "{err}");
    }

    #[test]
    fn unknown_scheme_lists_valid_tags() {
        let err = parse_config("schemes = [\"zf\"]").unwrap_err().to_string();
        for tag in ["mf", "ce", "mf_an", "ce_scheme1", "ce_scheme2"] {
            assert!(err.contains(tag), "{err}");
        }
    }

    #[test]
    fn parse_error_has_line_info() {
        let err = parse_config("schemes = [\"ce\"]\ntrials = \"many\"\n").unwrap_err().to_string();
        assert!(err.contains("line 2") || err.contains(":2:") || err.contains("2 |"), "{err}");
        assert!(err.contains("trials"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(parse_config("schemes = [\"ce\"]\nfoo = 1").is_err());
        assert!(parse_config("schemes = [\"ce\"]\n[ce_scheme2]\nsplit = \"middle\"").is_err());
    }

    #[test]
    fn sections_parse() {
        let cfg = parse_config(
            "schemes = [\"mf_an\", \"ce_scheme1\", \"ce_scheme2\"]\n\
             [mf_an]\neta_grid = [0.2, 0.8]\n\
             [ce_scheme1]\nan_power_target = 33.0\n\
             [ce_scheme2]\nsplit = \"lower\"\nleakage_phase = \"signal\"\n",
        )
        .unwrap();
        assert_eq!(cfg.mf_an.eta_grid, vec![0.2, 0.8]);
        assert_eq!(cfg.scheme1.an_power_target, Some(33.0));
        assert_eq!(cfg.scheme2.split, EveSplit::Lower);
        assert_eq!(cfg.scheme2.leakage_phase, LeakagePhase::Signal);
    }

    #[test]
    fn empty_grids_rejected() {
        assert!(parse_config("schemes = []").is_err());
        assert!(parse_config("schemes = [\"mf\"]\nsnr_db_grid = []").is_err());
        assert!(parse_config("schemes = [\"mf\"]\nn_t_grid = [0]").is_err());
        assert!(parse_config("schemes = [\"mf\"]\neta = 0.0").is_err());
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_config("/nonexistent/sweep.toml").unwrap_err().to_string();
        assert!(err.contains("/nonexistent/sweep.toml"));
    }
}
