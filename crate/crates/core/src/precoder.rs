//! Per-antenna constant-envelope precoder and the doughnut set of noise-free
//! received values it can reach.
//!
//! With phases `θ` the user sees the noise-free value
//! `u = (1/√N_t) Σ h_i e^{jθ_i}`. Precoding inverts that map: given a target
//! `u` it searches for phases whose synthesized value hits it.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::channel::{ChannelVector, RngStream};
use crate::error::{usage, Result};
use crate::special::{norm_1, norm_inf};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Information-bearing transmit phases, one per antenna, each in `(-π, π]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector(Vec<f64>);

impl PhaseVector {
    /// Validates that every entry already lies in `(-π, π]`.
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.iter().any(|p| !(p.is_finite() && *p > -PI && *p <= PI)) {
            return Err(usage("phases must be finite and in (-pi, pi]"));
        }
        Ok(Self(phases))
    }

    /// Wraps arbitrary finite angles into range.
    pub fn wrapped(phases: impl IntoIterator<Item = f64>) -> Self {
        Self(phases.into_iter().map(wrap_phase).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Outer radius `M(h)` of the doughnut set and the upper bound on its inner
/// radius `m(h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoughnutBounds {
    pub outer: f64,
    pub inner_upper_bound: f64,
}

/// `M(h) = ||h||₁/√N_t` and `m(h) ≤ ||h||_∞/√N_t`.
pub fn doughnut_bounds(h: &ChannelVector) -> Result<DoughnutBounds> {
    let scale = (h.n_t() as f64).sqrt().recip();
    Ok(DoughnutBounds {
        outer: norm_1(h.gains())? * scale,
        inner_upper_bound: norm_inf(h.gains())? * scale,
    })
}

/// `(1/√N_t) Σ h_i e^{jθ_i}`.
pub fn synthesize_noise_free(h: &ChannelVector, phases: &PhaseVector) -> Result<Complex64> {
    if h.n_t() != phases.len() {
        return Err(usage(format!(
            "channel has {} antennas but {} phases were given",
            h.n_t(),
            phases.len()
        )));
    }
    let sum: Complex64 = h
        .gains()
        .iter()
        .zip(phases.as_slice())
        .map(|(g, &t)| g * Complex64::cis(t))
        .sum();
    Ok(sum / (h.n_t() as f64).sqrt())
}

/// Shifts every phase by `psi`, which rotates the synthesized value by `e^{jψ}`.
pub fn rotate_phases(phases: &PhaseVector, psi: f64) -> PhaseVector {
    PhaseVector::wrapped(phases.as_slice().iter().map(|t| t + psi))
}

/// CE transmit samples `sqrt(P_T/N_t) e^{jθ_i}` without any AN.
pub fn ce_transmit(p_t: f64, phases: &PhaseVector) -> Vec<Complex64> {
    let amp = (p_t / phases.len() as f64).sqrt();
    phases
        .as_slice()
        .iter()
        .map(|&t| Complex64::from_polar(amp, t))
        .collect()
}

#[derive(Clone, Debug)]
pub struct PrecodeOptions {
    /// Target on the squared residual `|u - synth(θ)|²`.
    pub tolerance: f64,
    /// Coordinate sweeps per start.
    pub max_sweeps: usize,
    /// Random starts tried before giving up; the best one is kept.
    pub starts: usize,
}

impl Default for PrecodeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_sweeps: 200,
            starts: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrecodeResult {
    pub phases: PhaseVector,
    /// `|u - (1/√N_t) Σ h_i e^{jθ_i}|²` as achieved.
    pub residual: f64,
    /// Total coordinate sweeps over all starts.
    pub iterations: usize,
    pub converged: bool,
}

fn residual_of(u: Complex64, h: &[Complex64], phases: &[f64], scale: f64) -> f64 {
    let s: Complex64 = h.iter().zip(phases).map(|(g, &t)| g * Complex64::cis(t)).sum();
    (u - s * scale).norm_sqr()
}

/// Finds phases `θ` with `(1/√N_t) Σ h_i e^{jθ_i} ≈ u`.
///
/// The phases that put every term on `u`'s direction are tried first; they
/// are optimal whenever `|u| ≥ M(h)`. Otherwise cyclic coordinate descent runs
/// from random phases: each coordinate step rotates `h_i e^{jθ_i}` onto the
/// direction of the residual it leaves behind, which exactly minimises the
/// objective along that coordinate.
///
/// Exceeding the sweep budget is reported through `converged = false`.
pub fn precode(
    u: Complex64,
    h: &ChannelVector,
    opts: &PrecodeOptions,
    stream: &mut RngStream,
) -> Result<PrecodeResult> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(usage("information symbol must be finite"));
    }
    let gains = h.gains();
    let n = gains.len();
    let scale = (n as f64).sqrt().recip();

    let target_arg = if u.norm() > 0.0 { u.arg() } else { 0.0 };
    let aligned: Vec<f64> = gains.iter().map(|g| wrap_phase(target_arg - g.arg())).collect();
    let aligned_residual = residual_of(u, gains, &aligned, scale);
    let outer = norm_1(gains)? * scale;
    if aligned_residual <= opts.tolerance || u.norm() >= outer {
        return Ok(PrecodeResult {
            phases: PhaseVector(aligned),
            residual: aligned_residual,
            iterations: 0,
            converged: aligned_residual <= opts.tolerance,
        });
    }

    let terms_abs: Vec<f64> = gains.iter().map(|g| g.norm() * scale).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0;
    for _ in 0..opts.starts.max(1) {
        let mut phases: Vec<f64> = (0..n).map(|_| stream.uniform_phase()).collect();
        let mut residual = u - gains
            .iter()
            .zip(&phases)
            .map(|(g, &t)| g * Complex64::cis(t))
            .sum::<Complex64>()
            * scale;
        let mut err = residual.norm_sqr();
        for _ in 0..opts.max_sweeps {
            if err <= opts.tolerance {
                break;
            }
            iterations += 1;
            for i in 0..n {
                if terms_abs[i] == 0.0 {
                    continue;
                }
                let want = residual + gains[i] * Complex64::cis(phases[i]) * scale;
                if want.norm() == 0.0 {
                    continue;
                }
                let arg = want.arg();
                phases[i] = wrap_phase(arg - gains[i].arg());
                residual = want - Complex64::from_polar(terms_abs[i], arg);
            }
            // refresh to stop drift in the running residual
            err = residual_of(u, gains, &phases, scale);
            residual = u - gains
                .iter()
                .zip(&phases)
                .map(|(g, &t)| g * Complex64::cis(t))
                .sum::<Complex64>()
                * scale;
        }
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((phases, err));
        }
        if err <= opts.tolerance {
            break;
        }
    }

    let (phases, residual) = best.expect("at least one start");
    let residual = residual.min(aligned_residual);
    let phases = if residual == aligned_residual {
        aligned
    } else {
        phases
    };
    Ok(PrecodeResult {
        phases: PhaseVector(phases),
        residual,
        iterations,
        converged: residual <= opts.tolerance,
    })
}
