//! i.i.d. Rayleigh-fading channels and reproducible random streams.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{usage, Result};

/// Deterministic pseudo-random stream identified by `(master_seed, stream_index)`.
///
/// Backed by ChaCha8, whose output is platform independent and which exposes
/// 2^64 non-overlapping streams per key. The stream is an owned value: one per
/// trial, never shared between workers.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            rng,
            master_seed,
            stream_index,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform phase on `(-π, π]`.
    pub fn uniform_phase(&mut self) -> f64 {
        let v: f64 = self.rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        crate::precoder::wrap_phase(v)
    }

    /// Circularly-symmetric complex Gaussian with unit total variance.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Stream for trial `trial_index` of a run keyed by `master_seed`.
///
/// A pure function of its arguments, so trials can be evaluated in any order
/// on any number of threads.
pub fn derive_trial_stream(master_seed: u64, trial_index: u64) -> RngStream {
    RngStream::new(master_seed, trial_index)
}

/// Per-antenna gains from the base station to one receiver.
///
/// `cancel_gain` is the gain from the extra (non-CE) cancellation antenna
/// used by scheme II, when the array has one.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelVector {
    gains: Vec<Complex64>,
    cancel_gain: Option<Complex64>,
}

impl ChannelVector {
    pub fn new(gains: Vec<Complex64>, cancel_gain: Option<Complex64>) -> Result<Self> {
        if gains.is_empty() {
            return Err(usage("channel vector needs at least one antenna"));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !gains.iter().all(finite) || !cancel_gain.iter().all(finite) {
            return Err(usage("channel gains must be finite"));
        }
        Ok(Self { gains, cancel_gain })
    }

    /// Channel without a cancellation antenna.
    pub fn from_gains(gains: Vec<Complex64>) -> Result<Self> {
        Self::new(gains, None)
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    pub fn cancel_gain(&self) -> Option<Complex64> {
        self.cancel_gain
    }

    pub fn n_t(&self) -> usize {
        self.gains.len()
    }

    /// Same gains with the cancellation gain replaced.
    pub fn with_cancel_gain(mut self, cancel_gain: Option<Complex64>) -> Self {
        self.cancel_gain = cancel_gain;
        self
    }
}

/// Draws `n` i.i.d. `CN(0, 1)` gains, plus a cancellation gain when asked.
///
/// The array gains are drawn first, so two calls on identical streams agree
/// on the array gains whatever `with_cancel_antenna` is.
pub fn sample_channel(
    n: usize,
    with_cancel_antenna: bool,
    stream: &mut RngStream,
) -> Result<ChannelVector> {
    if n == 0 {
        return Err(usage("antenna count must be at least 1"));
    }
    let gains = (0..n).map(|_| stream.complex_gaussian()).collect();
    let cancel_gain = with_cancel_antenna.then(|| stream.complex_gaussian());
    Ok(ChannelVector { gains, cancel_gain })
}

/// User and eavesdropper channels drawn together for one trial. Either both
/// carry a cancellation gain (`h_0`, `g_0`) or neither does.
#[derive(Clone, Debug)]
pub struct LinkPair {
    pub user: ChannelVector,
    pub eve: ChannelVector,
}

impl LinkPair {
    pub fn sample(n: usize, with_cancel_antenna: bool, stream: &mut RngStream) -> Result<Self> {
        let user = sample_channel(n, with_cancel_antenna, stream)?;
        let eve = sample_channel(n, with_cancel_antenna, stream)?;
        Ok(Self { user, eve })
    }
}
