//! Monte-Carlo secrecy estimators for CE precoding with AN.
//!
//! Every trial draws the user and eavesdropper channels (with cancellation
//! gains when scheme II needs them), a symbol `u`, its CE phases, and the AN.
//! The user's rate is the CE lower bound on the same `h`. The user channel's
//! array gains are the first draws of each trial stream, so for a given seed
//! the user side matches [`c_ce_lower_mc`](super::c_ce_lower_mc) bit for bit.
//!
//! The eavesdropper sees `sqrt(P_T/N_t) (Σ g_i e^{jθ_i} + Σ_{i≥0} g_i β_i e^{jφ_i}) + n`.
//! Each trial splits the received power into an information part and an AN
//! part, see [`EveSplit`], and scores `log₂(1 + P_info / (P_AN + σ²))`.
//! The reported rate averages these scores over trials.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use super::{c_ce_eve, ce_rate_lower_bound, check_trials, CapacityResult, Estimator, SystemParams};
use crate::an::{scheme1_solve, scheme2_generate_with_floor, AnComponent, Scheme1Options, DEFAULT_CANCEL_GAIN_FLOOR};
use crate::channel::{ChannelVector, LinkPair, RngStream};
use crate::error::{Error, Result};
use crate::precoder::{doughnut_bounds, precode, PhaseVector, PrecodeOptions};
use crate::stats::{run_trials, Summary};

/// Radius of the transmitted symbol as a fraction of the doughnut's outer
/// radius `M(h)`; its phase is uniform.
pub const SYMBOL_RADIUS_FRACTION: f64 = 0.5;

/// How the eavesdropper's received power is split between information and AN.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EveSplit {
    /// Information power is the signal-only term `|Σ g_i e^{jθ_i}|²`; AN
    /// power is the AN-only term. Overstates the eavesdropper's information
    /// share, so the eavesdropper rate is an upper bound.
    #[default]
    Upper,
    /// Information power is the total received power minus the AN-only term.
    Lower,
}

/// Phase used in the AN leakage sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LeakagePhase {
    /// `β_i e^{jφ_i}`, the AN actually transmitted.
    #[default]
    An,
    /// `β_i e^{jθ_i}`, the variant written with the signal phase.
    Signal,
}

#[derive(Clone, Debug)]
pub struct Scheme2Options {
    /// When false every `β_i` and `x_0` is forced to zero.
    pub an_enabled: bool,
    pub split: EveSplit,
    pub leakage_phase: LeakagePhase,
    pub h0_floor: f64,
    pub precoder: PrecodeOptions,
}

impl Default for Scheme2Options {
    fn default() -> Self {
        Self {
            an_enabled: true,
            split: EveSplit::Upper,
            leakage_phase: LeakagePhase::An,
            h0_floor: DEFAULT_CANCEL_GAIN_FLOOR,
            precoder: PrecodeOptions::default(),
        }
    }
}

impl EveSplit {
    fn estimator(self) -> Estimator {
        match self {
            EveSplit::Upper => Estimator::McUpperBound,
            EveSplit::Lower => Estimator::McLowerBound,
        }
    }
}

fn draw_signal(h: &ChannelVector, opts: &PrecodeOptions, s: &mut RngStream) -> Result<PhaseVector> {
    let radius = SYMBOL_RADIUS_FRACTION * doughnut_bounds(h)?.outer;
    let u = Complex64::from_polar(radius, s.uniform_phase());
    Ok(precode(u, h, opts, s)?.phases)
}

/// Eavesdropper score for one realization.
fn eve_rate(
    p: &SystemParams,
    g: &ChannelVector,
    signal: &PhaseVector,
    an_sum: Complex64,
    split: EveSplit,
) -> f64 {
    let scale = p.p_t / g.n_t() as f64;
    let info: Complex64 = g
        .gains()
        .iter()
        .zip(signal.as_slice())
        .map(|(gi, &t)| gi * Complex64::cis(t))
        .sum();
    let p_info = scale * info.norm_sqr();
    let p_an = scale * an_sum.norm_sqr();
    let p_total = scale * (info + an_sum).norm_sqr();
    let signal_power = match split {
        EveSplit::Upper => p_info,
        EveSplit::Lower => (p_total - p_an).max(0.0),
    };
    (signal_power / (p_an + p.sigma2)).ln_1p() / LN_2
}

/// `Σ c_i β_i e^{jX_i}` with `X = φ` or `X = θ`.
fn leakage(c: &ChannelVector, an: &AnComponent, signal: &PhaseVector, phase: LeakagePhase) -> Complex64 {
    let angles = match phase {
        LeakagePhase::An => &an.phases,
        LeakagePhase::Signal => signal.as_slice(),
    };
    c.gains()
        .iter()
        .zip(&an.amplitudes)
        .zip(angles)
        .map(|((ci, &b), &a)| ci * Complex64::from_polar(b, a))
        .sum()
}

struct Trial {
    user: f64,
    eve: f64,
    flagged: bool,
    an_power: f64,
}

fn reduce(trials: &[Trial], seed: u64, eve_estimator: Estimator) -> (CapacityResult, CapacityResult, CapacityResult) {
    let users: Vec<f64> = trials.iter().map(|t| t.user).collect();
    let eves: Vec<f64> = trials.iter().map(|t| t.eve).collect();
    let diffs: Vec<f64> = trials.iter().map(|t| t.user - t.eve).collect();
    let user = CapacityResult::monte_carlo(Summary::of(&users), Estimator::McLowerBound, seed);
    let eve = CapacityResult::monte_carlo(Summary::of(&eves), eve_estimator, seed);
    let secrecy = CapacityResult::monte_carlo(Summary::of(&diffs), Estimator::McLowerBound, seed).clamped();
    (secrecy, user, eve)
}

#[derive(Clone, Debug)]
pub struct Scheme2Estimate {
    pub secrecy: CapacityResult,
    pub user: CapacityResult,
    pub eve: CapacityResult,
    /// Fraction of trials with `|h_0|` below the floor.
    pub low_cancel_gain_rate: f64,
    /// Median cancellation-antenna power `(P_T/N_t) |x_0|²`. The mean is
    /// not reported: `|x_0|² ∝ 1/|h_0|²` has no finite expectation under
    /// Rayleigh fading.
    pub median_cancel_power: f64,
}

/// Scheme II (random-phase AN plus one cancellation antenna) on common
/// random numbers: user, eavesdropper and secrecy from the same draws.
///
/// The AN cancels exactly at the user, so the user rate is the plain CE
/// bound. The eavesdropper's AN includes the cancellation antenna's
/// contribution `g_0 x_0`.
pub fn scheme2_estimate(
    p: &SystemParams,
    opts: &Scheme2Options,
    trials: usize,
    seed: u64,
) -> Result<Scheme2Estimate> {
    check_trials(trials)?;
    let scale = p.p_t / p.n_t as f64;
    let outcomes: Vec<Result<Trial>> = run_trials(trials, seed, |_, s| {
        let links = LinkPair::sample(p.n_t, true, s)?;
        let user = ce_rate_lower_bound(p, &links.user)?;
        let signal = draw_signal(&links.user, &opts.precoder, s)?;
        let generated = scheme2_generate_with_floor(&links.user, &signal, opts.h0_floor, s)?;
        let (an_sum, an_power) = if opts.an_enabled {
            let h0 = links.user.cancel_gain().expect("sampled with cancel antenna");
            let g0 = links.eve.cancel_gain().expect("sampled with cancel antenna");
            let x0 = -leakage(&links.user, &generated.an, &signal, opts.leakage_phase) / h0;
            let sum = leakage(&links.eve, &generated.an, &signal, opts.leakage_phase) + g0 * x0;
            (sum, scale * x0.norm_sqr())
        } else {
            (Complex64::new(0.0, 0.0), 0.0)
        };
        Ok(Trial {
            user,
            eve: eve_rate(p, &links.eve, &signal, an_sum, opts.split),
            flagged: generated.low_cancel_gain,
            an_power,
        })
    });
    let outcomes: Vec<Trial> = outcomes.into_iter().collect::<Result<_>>()?;
    let (secrecy, user, eve) = reduce(&outcomes, seed, opts.split.estimator());
    let n = outcomes.len() as f64;
    Ok(Scheme2Estimate {
        secrecy,
        user,
        eve,
        low_cancel_gain_rate: outcomes.iter().filter(|t| t.flagged).count() as f64 / n,
        median_cancel_power: median(outcomes.iter().map(|t| t.an_power).collect()),
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Scheme II eavesdropper rate with the default (upper-bound) power split.
pub fn eve_upper_bound_scheme2(p: &SystemParams, trials: usize, seed: u64) -> Result<CapacityResult> {
    Ok(scheme2_estimate(p, &Scheme2Options::default(), trials, seed)?.eve)
}

/// Scheme II secrecy `[C_CE - C_eve,II]⁺` with default options.
pub fn secrecy_scheme2_mc(p: &SystemParams, trials: usize, seed: u64) -> Result<CapacityResult> {
    Ok(scheme2_estimate(p, &Scheme2Options::default(), trials, seed)?.secrecy)
}

#[derive(Clone, Debug)]
pub struct Scheme1Estimate {
    /// Secrecy with the eavesdropper's AN ignored; equals `c_sec_ce` on the same seed.
    pub trivial: CapacityResult,
    /// Secrecy with the AN power measured at the eavesdropper.
    pub empirical: CapacityResult,
    pub user: CapacityResult,
    pub eve_trivial: CapacityResult,
    pub eve_empirical: CapacityResult,
    pub solver_failure_rate: f64,
    /// Mean `Σ β_i²` achieved.
    pub mean_an_power: f64,
}

/// Failure rate above which a scheme I estimate is rejected.
pub const MAX_SCHEME1_FAILURE_RATE: f64 = 0.2;

/// Scheme I (invisible AN) evaluated both with the trivial eavesdropper bound,
/// which ignores the AN, and with the AN power measured at the eavesdropper.
pub fn scheme1_estimate(
    p: &SystemParams,
    opts: &Scheme1Options,
    trials: usize,
    seed: u64,
) -> Result<Scheme1Estimate> {
    check_trials(trials)?;
    let precoder = PrecodeOptions::default();
    let outcomes: Vec<Result<(Trial, bool)>> = run_trials(trials, seed, |_, s| {
        let links = LinkPair::sample(p.n_t, false, s)?;
        let user = ce_rate_lower_bound(p, &links.user)?;
        let signal = draw_signal(&links.user, &precoder, s)?;
        let solved = scheme1_solve(&links.user, &signal, opts, s)?;
        let an_sum = leakage(&links.eve, &solved.an, &signal, LeakagePhase::An);
        Ok((
            Trial {
                user,
                eve: eve_rate(p, &links.eve, &signal, an_sum, EveSplit::Upper),
                flagged: !solved.converged,
                an_power: solved.an_power,
            },
            solved.converged,
        ))
    });
    let outcomes: Vec<Trial> = outcomes
        .into_iter()
        .map(|r| r.map(|(t, _)| t))
        .collect::<Result<_>>()?;
    let n = outcomes.len() as f64;
    let failure_rate = outcomes.iter().filter(|t| t.flagged).count() as f64 / n;
    if failure_rate > MAX_SCHEME1_FAILURE_RATE {
        return Err(Error::Estimator(format!(
            "scheme I solver failed in {:.1}% of {} trials (target Σβ² = {}, tolerance {}, n_t = {})",
            100.0 * failure_rate,
            outcomes.len(),
            opts.an_power_target,
            opts.tolerance,
            p.n_t
        )));
    }
    let (empirical, user, eve_empirical) = reduce(&outcomes, seed, Estimator::McUpperBound);
    let eve_trivial = c_ce_eve(p)?;
    let trivial = CapacityResult {
        value: user.value - eve_trivial.value,
        ..user
    }
    .clamped();
    Ok(Scheme1Estimate {
        trivial,
        empirical,
        user,
        eve_trivial,
        eve_empirical,
        solver_failure_rate: failure_rate,
        mean_an_power: outcomes.iter().map(|t| t.an_power).sum::<f64>() / n,
    })
}

/// Scheme I secrecy with the eavesdropper's AN power measured.
pub fn secrecy_scheme1_mc(
    p: &SystemParams,
    opts: &Scheme1Options,
    trials: usize,
    seed: u64,
) -> Result<Scheme1Estimate> {
    scheme1_estimate(p, opts, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{c_ce_lower_mc, c_eve_closed, c_sec_ce};

    fn params(n_t: usize, snr_db: f64) -> SystemParams {
        SystemParams::from_snr_db(n_t, snr_db).unwrap()
    }

    #[test]
    fn user_side_shares_draws_with_ce_bound() {
        let p = params(16, 10.0);
        let est = scheme2_estimate(&p, &Scheme2Options::default(), 200, 9).unwrap();
        assert_eq!(est.user.value, c_ce_lower_mc(&p, 200, 9).unwrap().value);
    }

    #[test]
    fn disabled_an_reduces_to_closed_eve() {
        let p = params(32, 10.0);
        let opts = Scheme2Options {
            an_enabled: false,
            ..Default::default()
        };
        let est = scheme2_estimate(&p, &opts, 4000, 2).unwrap();
        let closed = c_eve_closed(&p).unwrap().value;
        assert!((est.eve.value - closed).abs() <= 3.0 * est.eve.std_error, "{} vs {closed}", est.eve.value);
        let sec = c_sec_ce(&p, 4000, 2).unwrap();
        assert!((est.secrecy.value - sec.value).abs() <= 3.0 * est.secrecy.std_error.max(sec.std_error));
    }

    #[test]
    fn eve_vanishes_at_low_snr() {
        let p = params(16, -40.0);
        assert!(eve_upper_bound_scheme2(&p, 300, 1).unwrap().value <= 1e-3);
    }

    #[test]
    fn an_lowers_eve_rate() {
        let p = params(100, 10.0);
        let eve = eve_upper_bound_scheme2(&p, 1000, 4).unwrap();
        let closed = c_eve_closed(&p).unwrap().value;
        assert!(closed - eve.value >= 5.0 * eve.std_error, "{} vs {closed}", eve.value);
    }

    #[test]
    fn enabling_an_never_hurts_on_common_draws() {
        for snr in [0.0, 10.0, 30.0] {
            let p = params(64, snr);
            let on = scheme2_estimate(&p, &Scheme2Options::default(), 400, 5).unwrap();
            let off = scheme2_estimate(&p, &Scheme2Options { an_enabled: false, ..Default::default() }, 400, 5).unwrap();
            assert!(on.secrecy.value >= off.secrecy.value - 3.0 * on.secrecy.std_error);
        }
    }

    #[test]
    fn split_and_phase_variants_run() {
        let p = params(32, 20.0);
        let upper = scheme2_estimate(&p, &Scheme2Options::default(), 300, 1).unwrap();
        let lower = scheme2_estimate(&p, &Scheme2Options { split: EveSplit::Lower, ..Default::default() }, 300, 1).unwrap();
        let theta = scheme2_estimate(&p, &Scheme2Options { leakage_phase: LeakagePhase::Signal, ..Default::default() }, 300, 1).unwrap();
        assert_eq!(upper.eve.estimator, Estimator::McUpperBound);
        assert_eq!(lower.eve.estimator, Estimator::McLowerBound);
        for e in [&upper, &lower, &theta] {
            assert!(e.eve.value.is_finite() && e.eve.value >= 0.0);
            assert!(e.secrecy.value >= 0.0);
        }
    }

    #[test]
    fn scheme1_zero_target_matches_closed_eve() {
        let p = params(16, 10.0);
        let est = scheme1_estimate(&p, &Scheme1Options::with_target(0.0), 1000, 3).unwrap();
        let closed = c_eve_closed(&p).unwrap().value;
        assert_eq!(est.eve_trivial.value, closed);
        assert!((est.eve_empirical.value - closed).abs() <= 3.0 * est.eve_empirical.std_error);
        assert_eq!(est.solver_failure_rate, 0.0);
    }

    #[test]
    fn scheme1_trivial_equals_ce_secrecy() {
        let p = params(12, 15.0);
        let est = scheme1_estimate(&p, &Scheme1Options::with_target(4.0), 100, 8).unwrap();
        assert_eq!(est.trivial, c_sec_ce(&p, 100, 8).unwrap());
    }

    #[test]
    fn scheme1_rejects_high_failure_rate() {
        // Three antennas cannot hide this much AN power.
        let p = params(3, 10.0);
        let opts = Scheme1Options {
            max_restarts: 1,
            max_iters: 5,
            ..Scheme1Options::with_target(11.5)
        };
        assert!(matches!(scheme1_estimate(&p, &opts, 50, 0), Err(Error::Estimator(_))));
    }
}
