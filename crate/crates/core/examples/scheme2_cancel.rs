//! Random-phase AN with a cancellation antenna: zero at the user, noise at
//! an independent eavesdropper, and the price paid on the extra antenna.

use ce_secrecy::an::{aggregate_an_at, scheme2_generate};
use ce_secrecy::channel::{derive_trial_stream, LinkPair};
use ce_secrecy::precoder::{doughnut_bounds, precode, PrecodeOptions};
use ce_secrecy::Complex64;

fn main() -> ce_secrecy::Result<()> {
    let n_t = 100;
    let p_t = 100.0;
    for trial in 0..5 {
        let mut s = derive_trial_stream(5, trial);
        let links = LinkPair::sample(n_t, true, &mut s)?;
        let u = Complex64::from_polar(0.5 * doughnut_bounds(&links.user)?.outer, s.uniform_phase());
        let signal = precode(u, &links.user, &PrecodeOptions::default(), &mut s)?.phases;
        let out = scheme2_generate(&links.user, &signal, &mut s)?;
        let x0 = out.an.cancel_signal.unwrap_or_default();
        println!(
            "trial {trial}: |h_0| {:.3}, AN at user {:.1e}, AN power at eavesdropper {:.1}, cancel power {:.1}{}",
            links.user.cancel_gain().unwrap_or_default().norm(),
            aggregate_an_at(&links.user, &out.an, p_t)?.norm(),
            aggregate_an_at(&links.eve, &out.an, p_t)?.norm_sqr(),
            p_t / n_t as f64 * x0.norm_sqr(),
            if out.low_cancel_gain { " (low |h_0|)" } else { "" }
        );
    }
    Ok(())
}
