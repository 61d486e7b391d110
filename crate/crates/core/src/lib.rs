//! Outage-probability and DPSK bit-error-rate analysis for a multi-hop,
//! demodulate-and-forward hybrid FSO/RF relay chain whose first hop is an
//! N-antenna selection-combining RF link.
//!
//! The crate is layered bottom-up:
//!
//! * [`special`]: log-gamma, Pochhammer symbols, `erfc`, Laplace-type
//!   quadrature and truncated power-series algebra.
//! * [`channel`]: per-branch SNR laws (Rayleigh RF, Negative-Exponential FSO,
//!   Gamma-Gamma FSO with zero-boresight pointing error) as CDFs and samplers.
//! * [`system`]: selection combining per hop and the serial multi-hop outage.
//! * [`analytics`]: binomially expanded, series, asymptotic and quadrature
//!   evaluators for outage and DPSK BER.
//! * [`montecarlo`]: an independent stochastic estimator of both quantities.
//! * [`harness`]: JSON configs, figure presets, sweeps and CSV/JSON output
//!   used by the `linklab` binary.
//!
//! All SNRs are linear inside the library; decibels only appear in the
//! harness (`γ = 10^(dB/10)`).

pub mod analytics;
pub mod channel;
mod error;
pub mod harness;
pub mod montecarlo;
pub mod special;
pub mod system;

pub use error::{Error, Result};

/// Power decibels to linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear ratio to power decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
