//! Trial-parallel Monte-Carlo plumbing with worker-count-independent results.

use rayon::prelude::*;

use crate::channel::{derive_trial_stream, RngStream};

/// Runs `trial` for indices `0..trials` on the current rayon pool and returns
/// the outputs in trial order.
///
/// Each trial gets its own stream from `(seed, index)`, and callers reduce
/// the returned vector sequentially, so results do not depend on how rayon
/// schedules the work.
pub fn run_trials<T, F>(trials: usize, seed: u64, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut RngStream) -> T + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut stream = derive_trial_stream(seed, k);
            trial(k, &mut stream)
        })
        .collect()
}

/// Sample mean and standard error of the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self {
                mean: f64::NAN,
                std_error: f64::NAN,
                count,
            };
        }
        let n = count as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std_error = if count > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            count,
        }
    }
}
