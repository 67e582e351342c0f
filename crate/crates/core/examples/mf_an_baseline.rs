//! Linear baseline: MF with null-space AN, secrecy against the power split.

use ce_secrecy::capacity::{c_sec_mf, secrecy_mf_an_opt, SystemParams, DEFAULT_ETA_GRID};

fn main() -> ce_secrecy::Result<()> {
    let p = SystemParams::from_snr_db(100, 30.0)?;
    let est = secrecy_mf_an_opt(&p, &DEFAULT_ETA_GRID, 2000, 7)?;
    println!("N_t = 100, 30 dB; MF without AN: {:.3} bits", c_sec_mf(&p)?.value);
    for (eta, r) in &est.per_eta {
        println!("eta {eta:.2}: {:.3} ± {:.3}", r.value, r.std_error);
    }
    println!("best eta {:.2}: {:.3} bits", est.best_eta, est.best.value);
    Ok(())
}
