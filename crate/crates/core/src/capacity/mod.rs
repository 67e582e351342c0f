//! User, eavesdropper and secrecy rates in bits per channel use.
//!
//! Closed forms cover matched-filter (MF) precoding and the no-AN
//! eavesdropper. Everything involving the CE doughnut channel or AN is
//! estimated by Monte Carlo over i.i.d. Rayleigh draws, with one counter-based
//! stream per trial so results are reproducible for any worker count.
//!
//! Secrecy is always the ergodic difference clamped once at the end,
//! `[E(user) - E(eve)]⁺`, never a per-realization clamp.

mod mf_an;
mod montecarlo;

use std::f64::consts::{E, LN_2};

pub use mf_an::{null_space_basis, secrecy_mf_an_opt, MfAnEstimate, DEFAULT_ETA_GRID};
pub use montecarlo::{
    eve_upper_bound_scheme2, scheme1_estimate, scheme2_estimate, secrecy_scheme1_mc,
    secrecy_scheme2_mc, EveSplit, LeakagePhase, Scheme1Estimate, Scheme2Estimate, Scheme2Options,
};

use crate::channel::{sample_channel, ChannelVector};
use crate::error::{usage, Result};
use crate::special::{norm_1, norm_inf, scaled_exp_integral, scaled_exp_integrals};
use crate::stats::{run_trials, Summary};

/// Transmit power, noise variance, array size and power-allocation factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub p_t: f64,
    pub sigma2: f64,
    pub n_t: usize,
    pub eta: f64,
}

impl SystemParams {
    pub fn new(p_t: f64, sigma2: f64, n_t: usize, eta: f64) -> Result<Self> {
        if !(p_t > 0.0 && p_t.is_finite()) {
            return Err(usage(format!("p_t must be positive and finite, got {p_t}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(usage(format!("sigma2 must be positive and finite, got {sigma2}")));
        }
        if n_t == 0 {
            return Err(usage("n_t must be at least 1"));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(usage(format!("eta must be in [0, 1], got {eta}")));
        }
        Ok(Self {
            p_t,
            sigma2,
            n_t,
            eta,
        })
    }

    /// Unit noise variance, `P_T = 10^(snr_db/10)`, `eta = 1`.
    pub fn from_snr_db(n_t: usize, snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0), 1.0, n_t, 1.0)
    }

    /// `P_T / σ²`.
    pub fn snr(&self) -> f64 {
        self.p_t / self.sigma2
    }

    fn inverse_snr(&self) -> f64 {
        self.sigma2 / self.p_t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Estimator {
    ClosedForm,
    McLowerBound,
    McUpperBound,
    /// Monte-Carlo estimate of an exact ergodic rate.
    McEstimate,
}

impl Estimator {
    pub fn tag(self) -> &'static str {
        match self {
            Estimator::ClosedForm => "closed_form",
            Estimator::McLowerBound => "mc_lower_bound",
            Estimator::McUpperBound => "mc_upper_bound",
            Estimator::McEstimate => "mc_estimate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityResult {
    pub value: f64,
    pub estimator: Estimator,
    pub trials: usize,
    pub std_error: f64,
    pub master_seed: u64,
}

impl CapacityResult {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            estimator: Estimator::ClosedForm,
            trials: 0,
            std_error: 0.0,
            master_seed: 0,
        }
    }

    fn monte_carlo(summary: Summary, estimator: Estimator, seed: u64) -> Self {
        Self {
            value: summary.mean,
            estimator,
            trials: summary.count,
            std_error: summary.std_error,
            master_seed: seed,
        }
    }

    /// Same result with `value` clamped at zero.
    pub fn clamped(mut self) -> Self {
        self.value = self.value.max(0.0);
        self
    }
}

/// Ergodic MF capacity `(1/ln2) e^{σ²/P_T} Σ_{n=1}^{N_t} E_n(σ²/P_T)`.
pub fn c_mf(p: &SystemParams) -> Result<CapacityResult> {
    let sum = crate::special::scaled_exp_integral_sum(p.n_t as u32, p.inverse_snr())?;
    Ok(CapacityResult::closed_form(sum / LN_2))
}

/// No-AN eavesdropper capacity `(1/ln2) e^{σ²/P_T} E_1(σ²/P_T)`.
///
/// The eavesdropper's effective gain is `CN(0, 1)` under both MF and CE
/// precoding, so both cases resolve to this one function.
pub fn c_eve_closed(p: &SystemParams) -> Result<CapacityResult> {
    Ok(CapacityResult::closed_form(
        scaled_exp_integral(1, p.inverse_snr())? / LN_2,
    ))
}

/// Eavesdropper capacity under MF precoding without AN.
pub fn c_mf_eve(p: &SystemParams) -> Result<CapacityResult> {
    c_eve_closed(p)
}

/// Eavesdropper capacity under CE precoding without AN.
pub fn c_ce_eve(p: &SystemParams) -> Result<CapacityResult> {
    c_eve_closed(p)
}

/// MF secrecy capacity from the partial sum `(1/ln2) e^{x} Σ_{k=2}^{N_t} E_k(x)`.
pub fn c_sec_mf(p: &SystemParams) -> Result<CapacityResult> {
    let terms = scaled_exp_integrals(p.n_t as u32, p.inverse_snr())?;
    let partial: f64 = terms[1..].iter().sum();
    Ok(CapacityResult::closed_form((partial / LN_2).max(0.0)))
}

/// MF secrecy capacity as `[C_MF - C_MF-Eve]⁺`.
pub fn c_sec_mf_by_difference(p: &SystemParams) -> Result<CapacityResult> {
    Ok(CapacityResult::closed_form(
        (c_mf(p)?.value - c_eve_closed(p)?.value).max(0.0),
    ))
}

/// Per-channel CE rate lower bound
/// `log₂(1 + (P_T/σ²)(||h||₁² - ||h||_∞²) / (N_t e))`.
pub fn ce_rate_lower_bound(p: &SystemParams, h: &ChannelVector) -> Result<f64> {
    let l1 = norm_1(h.gains())?;
    let linf = norm_inf(h.gains())?;
    let gain = ((l1 * l1 - linf * linf) / (h.n_t() as f64 * E)).max(0.0);
    Ok((p.snr() * gain).ln_1p() / LN_2)
}

fn ce_user_rates(p: &SystemParams, trials: usize, seed: u64) -> Result<Vec<f64>> {
    run_trials(trials, seed, |_, s| {
        let h = sample_channel(p.n_t, false, s)?;
        ce_rate_lower_bound(p, &h)
    })
    .into_iter()
    .collect()
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(usage("trials must be at least 1"))
    } else {
        Ok(())
    }
}

/// Monte-Carlo lower bound on the ergodic CE user capacity.
pub fn c_ce_lower_mc(p: &SystemParams, trials: usize, seed: u64) -> Result<CapacityResult> {
    check_trials(trials)?;
    let rates = ce_user_rates(p, trials, seed)?;
    Ok(CapacityResult::monte_carlo(
        Summary::of(&rates),
        Estimator::McLowerBound,
        seed,
    ))
}

/// CE secrecy without AN: `[C_CE - C_CE-Eve]⁺`, the eavesdropper term exact.
pub fn c_sec_ce(p: &SystemParams, trials: usize, seed: u64) -> Result<CapacityResult> {
    let user = c_ce_lower_mc(p, trials, seed)?;
    let eve = c_ce_eve(p)?;
    Ok(CapacityResult {
        value: user.value - eve.value,
        ..user
    }
    .clamped())
}
