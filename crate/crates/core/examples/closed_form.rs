//! Closed-form MF user, eavesdropper and secrecy rates over an SNR grid.
//!
//!     cargo run --example closed_form -- 100

use ce_secrecy::capacity::{c_eve_closed, c_mf, c_sec_mf, SystemParams};

fn main() -> ce_secrecy::Result<()> {
    let n_t: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    println!("N_t = {n_t}");
    println!("{:>7} {:>10} {:>10} {:>10}", "snr_db", "c_mf", "c_eve", "c_sec_mf");
    for k in 0..=10 {
        let snr_db = -10.0 + 5.0 * k as f64;
        let p = SystemParams::from_snr_db(n_t, snr_db)?;
        println!(
            "{snr_db:>7} {:>10.4} {:>10.4} {:>10.4}",
            c_mf(&p)?.value,
            c_eve_closed(&p)?.value,
            c_sec_mf(&p)?.value
        );
    }
    Ok(())
}
