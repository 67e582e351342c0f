//! Cross-module checks between the AN generators and the rate estimators.

use std::f64::consts::{LN_2, TAU};

use ce_secrecy::an::{aggregate_an_at, scheme1_solve, scheme2_generate, Scheme1Options};
use ce_secrecy::capacity::{c_sec_ce, eve_upper_bound_scheme2, scheme1_estimate, secrecy_scheme2_mc, SystemParams};
use ce_secrecy::channel::{derive_trial_stream, sample_channel, ChannelVector};
use ce_secrecy::precoder::{doughnut_bounds, precode, PhaseVector, PrecodeOptions};
use ce_secrecy::Complex64;

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn scheme2_eavesdropper_matches_direct_evaluation() {
    let (n_t, snr_db, trials) = (100usize, 10.0, 10_000u64);
    let p = SystemParams::from_snr_db(n_t, snr_db).unwrap();
    let scale = p.p_t / n_t as f64;
    let mut rates = Vec::new();
    let mut array_an_power = Vec::new();
    for k in 0..trials {
        let mut s = derive_trial_stream(0xe5e, k);
        let h = sample_channel(n_t, true, &mut s).unwrap();
        let g = sample_channel(n_t, true, &mut s).unwrap();
        let u = Complex64::from_polar(0.5 * doughnut_bounds(&h).unwrap().outer, s.uniform_phase());
        let signal = precode(u, &h, &PrecodeOptions::default(), &mut s).unwrap().phases;
        let an = scheme2_generate(&h, &signal, &mut s).unwrap().an;
        let info: Complex64 = g.gains().iter().zip(signal.as_slice()).map(|(gi, &t)| gi * Complex64::cis(t)).sum();
        let p_an = aggregate_an_at(&g, &an, p.p_t).unwrap().norm_sqr();
        rates.push((scale * info.norm_sqr() / (p_an + p.sigma2)).ln_1p() / LN_2);
        let g_array = ChannelVector::from_gains(g.gains().to_vec()).unwrap();
        array_an_power.push(aggregate_an_at(&g_array, &an, p.p_t).unwrap().norm_sqr());
    }
    let (direct, direct_se) = mean_and_se(&rates);
    let est = eve_upper_bound_scheme2(&p, trials as usize, 0x5eed).unwrap();
    let z = (direct - est.value).abs() / (direct_se.powi(2) + est.std_error.powi(2)).sqrt();
    assert!(z <= 3.0, "direct {direct} vs estimator {} ({z} se)", est.value);

    // Σβ² has mean 2 N_t under uniform AN phases, so the array part carries 2 P_T.
    let (power, power_se) = mean_and_se(&array_an_power);
    assert!((power - 2.0 * p.p_t).abs() <= 3.0 * power_se, "{power} ± {power_se}");
}

#[test]
fn scheme2_never_hurts_secrecy() {
    let p = SystemParams::from_snr_db(100, 10.0).unwrap();
    let ce = c_sec_ce(&p, 1000, 1).unwrap();
    let s2 = secrecy_scheme2_mc(&p, 1000, 2).unwrap();
    assert!(s2.value >= ce.value - 3.0 * s2.std_error.hypot(ce.std_error), "{} vs {}", s2.value, ce.value);
}

#[test]
fn scheme1_measured_secrecy_beats_no_an() {
    let p = SystemParams::from_snr_db(100, 10.0).unwrap();
    let est = scheme1_estimate(&p, &Scheme1Options::with_target(100.0 / 3.0), 500, 3).unwrap();
    let ce = c_sec_ce(&p, 500, 3).unwrap();
    assert!(est.empirical.value >= ce.value, "{} vs {}", est.empirical.value, ce.value);
    assert_eq!(est.trivial.value, ce.value);
    assert!(est.solver_failure_rate <= 0.05);
}

/// For `h = [1, 1, 1, 1]` and `Θ = 0` the leakage is `-(4 + Σ e^{2jφ_i})` and
/// `Σβ² = 8 + 2 Re Σ e^{2jφ_i}`, so `Σβ² ≥ 1` forces `|leakage| ≥ 1/2`.
/// An exhaustive 128-level grid confirms the bound; the solver must report
/// failure rather than a leaky or degenerate point.
#[test]
fn scheme1_uniform_channel_has_no_nondegenerate_solution() {
    let levels = 128;
    let table: Vec<(Complex64, f64)> = (0..levels)
        .map(|k| {
            let phi = TAU * k as f64 / levels as f64;
            let beta = -2.0 * phi.cos();
            (Complex64::from_polar(beta, phi), beta * beta)
        })
        .collect();
    let mut best = f64::INFINITY;
    for a in &table {
        for b in &table {
            for c in &table {
                for d in &table {
                    if a.1 + b.1 + c.1 + d.1 >= 1.0 {
                        best = best.min((a.0 + b.0 + c.0 + d.0).norm());
                    }
                }
            }
        }
    }
    assert!(best >= 0.5 - 1e-12, "grid found leakage {best}");

    let h = ChannelVector::from_gains(vec![Complex64::new(1.0, 0.0); 4]).unwrap();
    let signal = PhaseVector::new(vec![0.0; 4]).unwrap();
    let mut s = derive_trial_stream(4, 0);
    for target in [1.0, 4.0, 8.0] {
        let out = scheme1_solve(&h, &signal, &Scheme1Options::with_target(target), &mut s).unwrap();
        assert!(!out.converged, "target {target}: leakage {} power {}", out.leakage, out.an_power);
    }
}
