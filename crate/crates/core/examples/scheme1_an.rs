//! Invisible AN on a 64-antenna array: the AN vanishes at the user while
//! carrying the requested power and leaving every envelope untouched.

use ce_secrecy::an::{aggregate_an_at, scheme1_solve, transmit_with_an, Scheme1Options};
use ce_secrecy::channel::{derive_trial_stream, sample_channel};
use ce_secrecy::precoder::{doughnut_bounds, precode, PrecodeOptions};
use ce_secrecy::special::norm_2;
use ce_secrecy::Complex64;

fn main() -> ce_secrecy::Result<()> {
    let n_t = 64;
    let p_t = 1.0;
    let mut s = derive_trial_stream(3, 0);
    let h = sample_channel(n_t, false, &mut s)?;
    let g = sample_channel(n_t, false, &mut s)?;
    let u = Complex64::from_polar(0.5 * doughnut_bounds(&h)?.outer, 0.0);
    let signal = precode(u, &h, &PrecodeOptions::default(), &mut s)?.phases;

    for eta in [0.9, 0.75, 0.5] {
        let opts = Scheme1Options::from_eta(eta, n_t)?;
        let out = scheme1_solve(&h, &signal, &opts, &mut s)?;
        let (x, _) = transmit_with_an(p_t, &signal, &out.an)?;
        let spread = x.iter().map(|v| (v.norm() - (p_t / n_t as f64).sqrt()).abs()).fold(0.0, f64::max);
        println!(
            "eta {eta}: target {:.2}, sum beta^2 {:.2}, leakage/||h|| {:.1e}, AN power at eavesdropper {:.3}, envelope error {:.1e}, converged {}",
            opts.an_power_target,
            out.an_power,
            out.leakage / norm_2(h.gains())?,
            aggregate_an_at(&g, &out.an, p_t)?.norm_sqr(),
            spread,
            out.converged
        );
    }
    Ok(())
}
