//! Fast invariant suite behind the `check` subcommand.
//!
//! Each check is a reduced-size version of an acceptance property and runs
//! in well under a second.

use num_complex::Complex64;

use crate::an::{scheme2_generate, transmit_with_an, aggregate_an_at};
use crate::capacity::{c_ce_eve, c_mf_eve, c_sec_mf, c_sec_mf_by_difference, SystemParams};
use crate::channel::{derive_trial_stream, sample_channel};
use crate::error::Result;
use crate::precoder::{ce_transmit, doughnut_bounds, precode, PrecodeOptions};
use crate::special::{gen_exp_integral, norm_2};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: Result<f64>, limit: f64) -> CheckResult {
    match worst {
        Ok(w) => CheckResult {
            name,
            passed: w <= limit,
            detail: format!("worst {w:.3e}, limit {limit:.0e}"),
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn sec_mf_forms() -> Result<f64> {
    let mut worst = 0.0f64;
    for n_t in [1, 4, 64] {
        for snr in [0.0, 10.0, 30.0] {
            let p = SystemParams::from_snr_db(n_t, snr)?;
            worst = worst.max((c_sec_mf(&p)?.value - c_sec_mf_by_difference(&p)?.value).abs());
        }
    }
    Ok(worst)
}

fn exp_integral_recurrence() -> Result<f64> {
    let mut worst = 0.0f64;
    for x in [0.01, 0.1, 1.0, 5.0, 20.0] {
        for n in 1..=128u32 {
            let lhs = gen_exp_integral(n + 1, x)?;
            let rhs = ((-x).exp() - x * gen_exp_integral(n, x)?) / n as f64;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

fn eve_equivalence() -> Result<f64> {
    let mut worst = 0.0f64;
    for snr in [-10.0, 0.0, 10.0, 20.0, 30.0, 40.0] {
        let p = SystemParams::from_snr_db(100, snr)?;
        worst = worst.max((c_ce_eve(&p)?.value - c_mf_eve(&p)?.value).abs());
    }
    Ok(worst)
}

fn envelope() -> Result<f64> {
    let p_t = 10.0;
    let n = 32;
    let amp = (p_t / n as f64).sqrt();
    let mut worst = 0.0f64;
    for k in 0..50 {
        let mut s = derive_trial_stream(11, k);
        let h = sample_channel(n, true, &mut s)?;
        let u = Complex64::from_polar(0.5 * doughnut_bounds(&h)?.outer, s.uniform_phase());
        let pre = precode(u, &h, &PrecodeOptions::default(), &mut s)?;
        let an = scheme2_generate(&h, &pre.phases, &mut s)?.an;
        let (with_an, _) = transmit_with_an(p_t, &pre.phases, &an)?;
        for x in ce_transmit(p_t, &pre.phases).into_iter().chain(with_an) {
            worst = worst.max((x.norm() - amp).abs() / amp);
        }
    }
    Ok(worst)
}

fn cancellation() -> Result<f64> {
    let n = 32;
    let p_t = 10.0;
    let mut worst = 0.0f64;
    for k in 0..200 {
        let mut s = derive_trial_stream(12, k);
        let h = sample_channel(n, true, &mut s)?;
        let signal = crate::precoder::PhaseVector::wrapped((0..n).map(|_| s.uniform_phase()));
        let an = scheme2_generate(&h, &signal, &mut s)?.an;
        let leak = aggregate_an_at(&h, &an, p_t)?.norm();
        worst = worst.max(leak / (norm_2(h.gains())? * (p_t / n as f64).sqrt()));
    }
    Ok(worst)
}

fn precoder_residual() -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..50 {
        let mut s = derive_trial_stream(13, k);
        let h = sample_channel(64, false, &mut s)?;
        let u = Complex64::from_polar(0.5 * doughnut_bounds(&h)?.outer, s.uniform_phase());
        worst = worst.max(precode(u, &h, &PrecodeOptions::default(), &mut s)?.residual);
    }
    Ok(worst)
}

/// Runs every check and reports each outcome.
pub fn run_checks() -> Vec<CheckResult> {
    vec![
        outcome("secrecy MF closed forms agree", sec_mf_forms(), 1e-12),
        outcome("E_n recurrence", exp_integral_recurrence(), 1e-10),
        outcome("CE and MF eavesdropper closed forms identical", eve_equivalence(), 0.0),
        outcome("constant envelope with and without AN", envelope(), 1e-12),
        outcome("scheme II cancels AN at the user", cancellation(), 1e-12),
        outcome("precoder reaches interior targets", precoder_residual(), 1e-10),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_checks() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
