//! CE precoding of a few target symbols on one channel draw: the doughnut
//! bounds, the achieved residual and the per-antenna envelope.

use ce_secrecy::channel::{derive_trial_stream, sample_channel};
use ce_secrecy::precoder::{ce_transmit, doughnut_bounds, precode, synthesize_noise_free, PrecodeOptions};
use ce_secrecy::Complex64;

fn main() -> ce_secrecy::Result<()> {
    let n_t = 16;
    let p_t = 10.0;
    let mut s = derive_trial_stream(1, 0);
    let h = sample_channel(n_t, false, &mut s)?;
    let bounds = doughnut_bounds(&h)?;
    println!("M(h) = {:.4}, m(h) <= {:.4}", bounds.outer, bounds.inner_upper_bound);

    for frac in [0.0, 0.05, 0.5, 1.0, 1.2] {
        let u = Complex64::from_polar(frac * bounds.outer, 0.7);
        let out = precode(u, &h, &PrecodeOptions::default(), &mut s)?;
        let got = synthesize_noise_free(&h, &out.phases)?;
        let env = ce_transmit(p_t, &out.phases)
            .iter()
            .map(|x| x.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), a| (lo.min(a), hi.max(a)));
        println!(
            "|u| = {:.3} M: residual {:.2e} after {} sweeps (converged {}), got {:.4}, |x_i| in [{:.6}, {:.6}]",
            frac, out.residual, out.iterations, out.converged, got, env.0, env.1
        );
    }
    Ok(())
}
