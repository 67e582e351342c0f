//! Artificial noise that keeps every antenna at constant envelope.
//!
//! Antenna `i` sends `sqrt(P_T/N_t) (e^{jθ_i} + β_i e^{jφ_i})`. With the
//! information amplitude fixed at one, the envelope stays at `sqrt(P_T/N_t)`
//! exactly when `β_i = -2 cos(θ_i - φ_i)`, so only the AN phases `φ` are free.
//!
//! - Scheme I picks `φ` so the AN sums to zero at the user, which costs no
//!   power beyond plain CE transmission.
//! - Scheme II draws `φ` uniformly and cancels the resulting leakage with
//!   one extra antenna that is not envelope-constrained.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::channel::{ChannelVector, RngStream};
use crate::error::{usage, Result};
use crate::precoder::{wrap_phase, PhaseVector};
use crate::special::norm_2;

/// Signed AN amplitudes `β`, AN phases `φ`, and the scheme II cancellation
/// signal `x_0` when present.
///
/// `x_0` is scale-free: the cancellation antenna transmits `sqrt(P_T/N_t) x_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnComponent {
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub cancel_signal: Option<Complex64>,
}

impl AnComponent {
    /// No AN at all: every `β_i = 0`.
    pub fn silent(n_t: usize) -> Self {
        Self {
            amplitudes: vec![0.0; n_t],
            phases: vec![0.0; n_t],
            cancel_signal: None,
        }
    }

    /// Builds the CE-preserving AN for the given phases: `β_i = -2cos(θ_i - φ_i)`.
    pub fn from_phases(signal: &PhaseVector, an_phases: Vec<f64>) -> Result<Self> {
        if signal.len() != an_phases.len() {
            return Err(usage("AN phase count must match the signal phase count"));
        }
        let phases: Vec<f64> = an_phases.into_iter().map(wrap_phase).collect();
        let amplitudes = signal
            .as_slice()
            .iter()
            .zip(&phases)
            .map(|(&t, &p)| an_amplitude(t, p))
            .collect();
        Ok(Self {
            amplitudes,
            phases,
            cancel_signal: None,
        })
    }

    pub fn n_t(&self) -> usize {
        self.amplitudes.len()
    }

    /// `Σ β_i²`.
    pub fn power(&self) -> f64 {
        self.amplitudes.iter().map(|b| b * b).sum()
    }

    /// `β_i e^{jφ_i}` per antenna.
    pub fn weights(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.amplitudes
            .iter()
            .zip(&self.phases)
            .map(|(&b, &p)| Complex64::from_polar(1.0, p) * b)
    }
}

/// `β = -2 cos(θ - φ)`, the non-zero root keeping `|e^{jθ} + β e^{jφ}| = 1`.
pub fn an_amplitude(theta: f64, phi: f64) -> f64 {
    -2.0 * (theta - phi).cos()
}

/// Per-antenna transmit samples with AN added, plus the cancellation
/// antenna's sample when the AN carries one.
pub fn transmit_with_an(
    p_t: f64,
    signal: &PhaseVector,
    an: &AnComponent,
) -> Result<(Vec<Complex64>, Option<Complex64>)> {
    if signal.len() != an.n_t() {
        return Err(usage("AN length must match the signal phase count"));
    }
    let amp = (p_t / signal.len() as f64).sqrt();
    let array = signal
        .as_slice()
        .iter()
        .zip(an.weights())
        .map(|(&t, w)| (Complex64::cis(t) + w) * amp)
        .collect();
    Ok((array, an.cancel_signal.map(|x0| x0 * amp)))
}

/// Aggregate AN seen through `channel`:
/// `sqrt(P_T/N_t) (Σ c_i β_i e^{jφ_i} + c_0 x_0)`.
///
/// The cancellation term is included only when both the channel has a
/// cancellation gain and the AN carries `x_0`.
pub fn aggregate_an_at(channel: &ChannelVector, an: &AnComponent, p_t: f64) -> Result<Complex64> {
    if channel.n_t() != an.n_t() {
        return Err(usage(format!(
            "channel has {} antennas, AN has {}",
            channel.n_t(),
            an.n_t()
        )));
    }
    let mut sum: Complex64 = channel.gains().iter().zip(an.weights()).map(|(c, w)| c * w).sum();
    if let (Some(c0), Some(x0)) = (channel.cancel_gain(), an.cancel_signal) {
        sum += c0 * x0;
    }
    Ok(sum * (p_t / an.n_t() as f64).sqrt())
}

#[derive(Clone, Debug)]
pub struct Scheme1Options {
    /// Target for `Σ β_i²`, in `[0, 4 N_t]`.
    pub an_power_target: f64,
    /// Weight of `(Σβ² - target)²` in the penalised objective.
    pub penalty_weight: f64,
    /// Acceptance threshold on `|Σ h_i β_i e^{jφ_i}| / ||h||₂`.
    pub tolerance: f64,
    /// Coordinate-descent sweeps per start.
    pub max_iters: usize,
    pub max_restarts: usize,
}

impl Scheme1Options {
    /// Options with the AN power target set from the power-allocation factor:
    /// with unit information amplitudes `Σα² = N_t`, so `Σβ² = N_t (1-η)/η`.
    pub fn from_eta(eta: f64, n_t: usize) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(usage(format!("eta must be in (0, 1] for scheme I, got {eta}")));
        }
        Ok(Self {
            an_power_target: n_t as f64 * (1.0 - eta) / eta,
            ..Self::default()
        })
    }

    pub fn with_target(an_power_target: f64) -> Self {
        Self {
            an_power_target,
            ..Self::default()
        }
    }
}

impl Default for Scheme1Options {
    fn default() -> Self {
        Self {
            an_power_target: 0.0,
            penalty_weight: 0.05,
            tolerance: 1e-6,
            max_iters: 60,
            max_restarts: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scheme1Outcome {
    pub an: AnComponent,
    /// `|Σ h_i β_i e^{jφ_i}|` as achieved.
    pub leakage: f64,
    /// `Σ β_i²` as achieved.
    pub an_power: f64,
    pub converged: bool,
    pub starts: usize,
}

// Scheme I is solved in the angle ψ_i = 2φ_i - θ_i, where
//   Σ h_i cos(θ_i - φ_i) e^{jφ_i} = ½ Σ h_i e^{jθ_i} + ½ Σ h_i e^{jψ_i}
//   β_i² = 2 (1 + cos(θ_i - ψ_i)).
// φ_i is recovered modulo π, which leaves β_i e^{jφ_i} unchanged.
struct Scheme1Problem<'a> {
    half_gains: Vec<Complex64>,
    thetas: &'a [f64],
    fixed: Complex64,
    target: f64,
    weight: f64,
}

impl Scheme1Problem<'_> {
    fn state(&self, psi: &[f64]) -> (Complex64, f64) {
        let mut r = self.fixed;
        let mut p = 0.0;
        for ((b, &t), &s) in self.half_gains.iter().zip(self.thetas).zip(psi) {
            r += b * Complex64::cis(s);
            p += 2.0 * (1.0 + (t - s).cos());
        }
        (r, p)
    }

    fn sweep(&self, psi: &mut [f64]) {
        let (mut r, mut p) = self.state(psi);
        for i in 0..psi.len() {
            let b = self.half_gains[i];
            let theta = self.thetas[i];
            let a = r - b * Complex64::cis(psi[i]);
            let d = p - 2.0 * (1.0 + (theta - psi[i]).cos()) - self.target + 2.0;
            let k = 2.0 * a.conj() * b * Complex64::cis(theta);
            let t = minimise_coordinate(k, d, self.weight);
            psi[i] = wrap_phase(theta + t);
            r = a + b * Complex64::cis(psi[i]);
            p = d + self.target - 2.0 + 2.0 * (1.0 + t.cos());
        }
    }

    /// Minimum-norm Gauss-Newton step on `(Re R, Im R, P - target) = 0`.
    fn newton_step(&self, psi: &mut [f64]) -> bool {
        let (r, p) = self.state(psi);
        let f = [r.re, r.im, p - self.target];
        let rows: Vec<[f64; 3]> = self
            .half_gains
            .iter()
            .zip(self.thetas)
            .zip(psi.iter())
            .map(|((b, &t), &s)| {
                let z = b * Complex64::cis(s);
                [-z.im, z.re, 2.0 * (t - s).sin()]
            })
            .collect();
        let mut jjt = [[0.0; 3]; 3];
        for row in &rows {
            for a in 0..3 {
                for c in 0..3 {
                    jjt[a][c] += row[a] * row[c];
                }
            }
        }
        let Some(lambda) = solve3(jjt, f) else {
            return false;
        };
        for (s, row) in psi.iter_mut().zip(&rows) {
            *s = wrap_phase(*s - (row[0] * lambda[0] + row[1] * lambda[1] + row[2] * lambda[2]));
        }
        true
    }
}

/// Minimises `Re(k e^{jt}) + w (d + 2 cos t)²` over `t`.
fn minimise_coordinate(k: Complex64, d: f64, w: f64) -> f64 {
    let f = |t: f64| (k * Complex64::cis(t)).re + w * (d + 2.0 * t.cos()).powi(2);
    const GRID: usize = 24;
    let (mut best_t, mut best_f) = (0.0, f64::INFINITY);
    for g in 0..GRID {
        let t = -std::f64::consts::PI + TAU * (g as f64 + 0.5) / GRID as f64;
        let v = f(t);
        if v < best_f {
            best_t = t;
            best_f = v;
        }
    }
    let mut t = best_t;
    for _ in 0..6 {
        let (s, c) = t.sin_cos();
        let g1 = -k.re * s - k.im * c - 4.0 * w * (d + 2.0 * c) * s;
        let g2 = -k.re * c + k.im * s - 4.0 * w * (-2.0 * s * s + (d + 2.0 * c) * c);
        if g2 <= 0.0 {
            break;
        }
        let step = (g1 / g2).clamp(-0.5, 0.5);
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    if f(t) <= best_f {
        t
    } else {
        best_t
    }
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let scale = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max).powi(3);
    if d.abs() <= 1e-14 * scale || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *o = det(&mc) / d;
    }
    Some(out)
}

/// Scheme I: AN phases making the AN invisible at the user,
/// `Σ h_i cos(θ_i - φ_i) e^{jφ_i} = 0`, while carrying `Σβ² ≈ target`.
///
/// The trivial solution `φ_i = θ_i ± π/2` has zero AN, so the power target is
/// enforced through a penalty. Each start runs coordinate descent on
/// `|Σ h_i cos(θ_i-φ_i) e^{jφ_i}|² + w (Σβ² - target)²` from random phases
/// and then polishes with minimum-norm Gauss-Newton steps. A start is
/// accepted when the leakage is within `tolerance · ||h||₂` and the AN power
/// within 10% of the target; otherwise the best attempt comes back with
/// `converged = false`.
pub fn scheme1_solve(
    h: &ChannelVector,
    signal: &PhaseVector,
    opts: &Scheme1Options,
    stream: &mut RngStream,
) -> Result<Scheme1Outcome> {
    let n = h.n_t();
    if n < 3 {
        return Err(usage("scheme I needs at least 3 antennas"));
    }
    if signal.len() != n {
        return Err(usage("signal phase count must match the channel"));
    }
    let target = opts.an_power_target;
    if !(0.0..=4.0 * n as f64).contains(&target) {
        return Err(usage(format!(
            "AN power target {target} outside the feasible range [0, {}]",
            4 * n
        )));
    }
    if !(opts.tolerance > 0.0) || !(opts.penalty_weight > 0.0) {
        return Err(usage("scheme I tolerance and penalty weight must be positive"));
    }
    let h_norm = norm_2(h.gains())?;
    let thetas = signal.as_slice();

    let finish = |an: AnComponent, starts: usize| -> Result<Scheme1Outcome> {
        let leakage = aggregate_an_at(h, &an, n as f64)?.norm();
        let an_power = an.power();
        let converged = leakage <= opts.tolerance * h_norm
            && (an_power - target).abs() <= 0.1 * target;
        Ok(Scheme1Outcome {
            an,
            leakage,
            an_power,
            converged,
            starts,
        })
    };

    if target == 0.0 {
        // φ = θ + π/2 gives β = 0 up to rounding; store the exact zeros.
        let mut an = AnComponent::from_phases(signal, thetas.iter().map(|t| t + FRAC_PI_2).collect())?;
        an.amplitudes.iter_mut().for_each(|b| *b = 0.0);
        return finish(an, 0);
    }

    let problem = Scheme1Problem {
        half_gains: h.gains().iter().map(|g| g * 0.5).collect(),
        thetas,
        fixed: h
            .gains()
            .iter()
            .zip(thetas)
            .map(|(g, &t)| g * Complex64::cis(t) * 0.5)
            .sum(),
        target,
        weight: opts.penalty_weight,
    };
    let to_an = |psi: &[f64]| {
        AnComponent::from_phases(
            signal,
            psi.iter().zip(thetas).map(|(s, t)| 0.5 * (s + t)).collect(),
        )
    };

    let mut best: Option<Scheme1Outcome> = None;
    let starts = opts.max_restarts.max(1);
    for start in 1..=starts {
        let mut psi: Vec<f64> = (0..n).map(|_| stream.uniform_phase()).collect();
        for _ in 0..opts.max_iters {
            problem.sweep(&mut psi);
            let (r, p) = problem.state(&psi);
            if r.norm() <= 1e-2 * h_norm && (p - target).abs() <= 0.02 * target {
                break;
            }
        }
        for _ in 0..30 {
            let (r, _) = problem.state(&psi);
            if 2.0 * r.norm() <= 0.01 * opts.tolerance * h_norm || !problem.newton_step(&mut psi) {
                break;
            }
        }
        let outcome = finish(to_an(&psi)?, start)?;
        let better = best.as_ref().is_none_or(|b| {
            (outcome.converged && !b.converged)
                || (outcome.converged == b.converged && outcome.leakage < b.leakage)
        });
        if better {
            best = Some(outcome);
        }
        if best.as_ref().is_some_and(|b| b.converged) {
            break;
        }
    }
    let mut out = best.expect("at least one start");
    out.starts = starts.min(out.starts.max(1));
    Ok(out)
}

/// Default `|h_0|` below which the cancellation signal is flagged.
pub const DEFAULT_CANCEL_GAIN_FLOOR: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct Scheme2Outcome {
    pub an: AnComponent,
    /// Set when `|h_0|` is below the floor, i.e. `x_0` may be very large.
    pub low_cancel_gain: bool,
}

/// Scheme II with the default `|h_0|` floor.
pub fn scheme2_generate(
    h: &ChannelVector,
    signal: &PhaseVector,
    stream: &mut RngStream,
) -> Result<Scheme2Outcome> {
    scheme2_generate_with_floor(h, signal, DEFAULT_CANCEL_GAIN_FLOOR, stream)
}

/// Scheme II: uniform random AN phases on every CE antenna, with the leakage
/// at the user cancelled by `x_0 = -Σ h_i β_i e^{jφ_i} / h_0`.
pub fn scheme2_generate_with_floor(
    h: &ChannelVector,
    signal: &PhaseVector,
    h0_floor: f64,
    stream: &mut RngStream,
) -> Result<Scheme2Outcome> {
    let h0 = match h.cancel_gain() {
        Some(g) if g.norm() > 0.0 => g,
        _ => return Err(usage("scheme II needs a non-zero cancellation-antenna gain h_0")),
    };
    if signal.len() != h.n_t() {
        return Err(usage("signal phase count must match the channel"));
    }
    let phases = (0..h.n_t()).map(|_| stream.uniform_phase()).collect();
    let mut an = AnComponent::from_phases(signal, phases)?;
    let leakage: Complex64 = h.gains().iter().zip(an.weights()).map(|(g, w)| g * w).sum();
    an.cancel_signal = Some(-leakage / h0);
    Ok(Scheme2Outcome {
        an,
        low_cancel_gain: h0.norm() < h0_floor,
    })
}
