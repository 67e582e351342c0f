//! Constant-envelope (CE) precoding for secure large-scale MISO downlink.
//!
//! Every base-station antenna transmits at the fixed amplitude `sqrt(P_T / N_t)`
//! and only the per-antenna phase carries information. On top of that signal the
//! crate builds artificial noise (AN) that keeps the envelope constant and
//! vanishes at the intended user, then estimates the resulting ergodic secrecy
//! rates against a single-antenna eavesdropper.
//!
//! Module map:
//!
//! - [`special`]: generalized exponential integral `E_n(x)` and complex-vector norms.
//! - [`channel`]: i.i.d. Rayleigh channels and counter-based random streams.
//! - [`precoder`]: the CE precoder `u -> phases` and doughnut-set geometry.
//! - [`an`]: CE-preserving AN, both the invisible (scheme I) and the
//!   random-phase-plus-cancellation (scheme II) constructions.
//! - [`capacity`]: closed-form and Monte-Carlo rate estimators.
//! - [`harness`]: config loading, seeded sweeps, CSV and gnuplot output.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod an;
pub mod capacity;
pub mod channel;
pub mod check;
pub mod error;
pub mod harness;
pub mod precoder;
pub mod special;
pub mod stats;

pub use num_complex::Complex64;

pub use error::{Error, Result};
