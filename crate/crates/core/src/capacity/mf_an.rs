//! MF precoding with null-space AN, the linear baseline.
//!
//! The transmitter sends `sqrt(η P_T) w s + sqrt((1-η) P_T) V z` with
//! `w = h†/||h||`, `V` an orthonormal basis of the null space of `h` and
//! `z ~ CN(0, I/(N_t-1))` so the AN carries power `(1-η) P_T`. The user never
//! sees the AN; the eavesdropper sees `(1-η) P_T ||g V||² / (N_t-1)` of it.
//!
//! `||g V||²` is the energy of `g` outside the direction of `h`, i.e.
//! `||g||² - |g h†|² / ||h||²`, which is what the estimator uses;
//! [`null_space_basis`] builds `V` explicitly.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use super::{check_trials, CapacityResult, Estimator, SystemParams};
use crate::channel::LinkPair;
use crate::error::{usage, Result};
use crate::stats::{run_trials, Summary};

/// `{0.05, 0.10, …, 0.95}`.
pub const DEFAULT_ETA_GRID: [f64; 19] = [
    0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75,
    0.80, 0.85, 0.90, 0.95,
];

/// Orthonormal columns `v_1 … v_{N_t-1}` with `Σ_i h_i v_{k,i} = 0`.
///
/// Gram-Schmidt (applied twice) on `conj(h)/||h||` followed by the standard
/// basis, dropping the one basis vector that collapses.
pub fn null_space_basis(h: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let n = h.len();
    if n < 2 {
        return Err(usage("null space of h needs at least 2 antennas"));
    }
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(usage("null space of an all-zero channel is undefined"));
    }
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
    };
    let mut basis: Vec<Vec<Complex64>> = vec![h.iter().map(|z| z.conj() / norm).collect()];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let len = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if len > 1e-8 {
            basis.push(v.into_iter().map(|z| z / len).collect());
        }
    }
    basis.remove(0);
    Ok(basis)
}

#[derive(Clone, Debug)]
pub struct MfAnEstimate {
    pub best: CapacityResult,
    pub best_eta: f64,
    pub user: CapacityResult,
    pub eve: CapacityResult,
    /// Secrecy at every grid point, in grid order.
    pub per_eta: Vec<(f64, CapacityResult)>,
}

/// Secrecy of MF with null-space AN, maximised over the `eta_grid`.
///
/// All grid points are evaluated on the same channel draws. Ties go to the
/// earliest grid point.
pub fn secrecy_mf_an_opt(
    p: &SystemParams,
    eta_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<MfAnEstimate> {
    check_trials(trials)?;
    if eta_grid.is_empty() {
        return Err(usage("eta grid must not be empty"));
    }
    if let Some(bad) = eta_grid.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        return Err(usage(format!("eta grid value {bad} outside [0, 1]")));
    }
    if p.n_t < 2 {
        return Err(usage("MF with AN needs n_t >= 2 (no null space otherwise)"));
    }
    let dims = (p.n_t - 1) as f64;
    let per_trial: Vec<Result<(f64, f64, f64)>> = run_trials(trials, seed, |_, s| {
        let links = LinkPair::sample(p.n_t, false, s)?;
        let h = links.user.gains();
        let g = links.eve.gains();
        let hh: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        let gg: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        let gh: Complex64 = g.iter().zip(h).map(|(a, b)| a * b.conj()).sum();
        let along = gh.norm_sqr() / hh;
        Ok((hh, along, (gg - along).max(0.0)))
    });
    let per_trial: Vec<(f64, f64, f64)> = per_trial.into_iter().collect::<Result<_>>()?;

    let mut per_eta = Vec::with_capacity(eta_grid.len());
    let mut best: Option<(usize, Summary, Summary, Summary)> = None;
    for (idx, &eta) in eta_grid.iter().enumerate() {
        let mut users = Vec::with_capacity(trials);
        let mut eves = Vec::with_capacity(trials);
        let mut diffs = Vec::with_capacity(trials);
        for &(hh, along, off) in &per_trial {
            let user = (eta * p.p_t * hh / p.sigma2).ln_1p() / LN_2;
            let noise = (1.0 - eta) * p.p_t * off / dims + p.sigma2;
            let eve = (eta * p.p_t * along / noise).ln_1p() / LN_2;
            users.push(user);
            eves.push(eve);
            diffs.push(user - eve);
        }
        let sec = Summary::of(&diffs);
        per_eta.push((eta, CapacityResult::monte_carlo(sec, Estimator::McEstimate, seed).clamped()));
        if best.as_ref().is_none_or(|b| sec.mean > b.1.mean) {
            best = Some((idx, sec, Summary::of(&users), Summary::of(&eves)));
        }
    }
    let (idx, sec, user, eve) = best.expect("non-empty grid");
    Ok(MfAnEstimate {
        best: CapacityResult::monte_carlo(sec, Estimator::McEstimate, seed).clamped(),
        best_eta: eta_grid[idx],
        user: CapacityResult::monte_carlo(user, Estimator::McEstimate, seed),
        eve: CapacityResult::monte_carlo(eve, Estimator::McEstimate, seed),
        per_eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::c_sec_mf;
    use crate::channel::{derive_trial_stream, sample_channel};

    fn params(n_t: usize, snr_db: f64) -> SystemParams {
        SystemParams::from_snr_db(n_t, snr_db).unwrap()
    }

    #[test]
    fn basis_is_orthonormal_null_space() {
        let h = sample_channel(7, false, &mut derive_trial_stream(1, 0)).unwrap();
        let v = null_space_basis(h.gains()).unwrap();
        assert_eq!(v.len(), 6);
        for (a, va) in v.iter().enumerate() {
            let hv: Complex64 = h.gains().iter().zip(va).map(|(x, y)| x * y).sum();
            assert!(hv.norm() < 1e-12);
            for vb in &v[a..] {
                let d: Complex64 = va.iter().zip(vb).map(|(x, y)| x * y.conj()).sum();
                let want = if std::ptr::eq(va, vb) { 1.0 } else { 0.0 };
                assert!((d - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_identity_matches_explicit_basis() {
        for k in 0..20 {
            let mut s = derive_trial_stream(2, k);
            let h = sample_channel(9, false, &mut s).unwrap();
            let g = sample_channel(9, false, &mut s).unwrap();
            let v = null_space_basis(h.gains()).unwrap();
            let explicit: f64 = v
                .iter()
                .map(|col| g.gains().iter().zip(col).map(|(a, b)| a * b).sum::<Complex64>().norm_sqr())
                .sum();
            let hh: f64 = h.gains().iter().map(|z| z.norm_sqr()).sum();
            let gg: f64 = g.gains().iter().map(|z| z.norm_sqr()).sum();
            let gh: Complex64 = g.gains().iter().zip(h.gains()).map(|(a, b)| a * b.conj()).sum();
            assert!((explicit - (gg - gh.norm_sqr() / hh)).abs() < 1e-10);
        }
    }

    #[test]
    fn eta_one_is_plain_mf() {
        let p = params(16, 10.0);
        let est = secrecy_mf_an_opt(&p, &[1.0], 20_000, 5).unwrap();
        let closed = c_sec_mf(&p).unwrap().value;
        assert!((est.best.value - closed).abs() <= 3.0 * est.best.std_error, "{} vs {closed}", est.best.value);
    }

    #[test]
    fn eta_zero_is_zero() {
        let est = secrecy_mf_an_opt(&params(8, 20.0), &[0.0], 100, 1).unwrap();
        assert_eq!(est.best.value, 0.0);
    }

    #[test]
    fn single_antenna_rejected() {
        assert!(secrecy_mf_an_opt(&params(1, 10.0), &DEFAULT_ETA_GRID, 10, 0).is_err());
        assert!(secrecy_mf_an_opt(&params(4, 10.0), &[], 10, 0).is_err());
        assert!(null_space_basis(&[Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn an_beats_plain_mf_at_high_snr() {
        let p = params(100, 30.0);
        let est = secrecy_mf_an_opt(&p, &DEFAULT_ETA_GRID, 1000, 3).unwrap();
        let mf = c_sec_mf(&p).unwrap().value;
        assert!(est.best.value - mf >= 5.0 * est.best.std_error);
        assert_eq!(est.per_eta.len(), DEFAULT_ETA_GRID.len());
    }
}
