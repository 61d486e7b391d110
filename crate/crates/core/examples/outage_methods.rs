//! End-to-end outage of an N-antenna, M-relay chain evaluated four ways:
//! the direct product form, the binomial expansion, its power-series form
//! and the high-SNR asymptote.
//!
//!     cargo run --example outage_methods

use linklab::analytics::{outage_asymptotic, outage_gg_pe, outage_gg_pe_series};
use linklab::channel::DEFAULT_TRUNCATION;
use linklab::system::{LinkBudget, SystemConfig, Topology, TurbulenceParams};
use linklab::{db_to_linear, Result};

fn main() -> Result<()> {
    let turbulence = TurbulenceParams::GammaGammaPe { alpha: 4.0, beta: 1.9, xi: 10.45, kappa: None };
    let base = SystemConfig::new(Topology::new(2, 2, db_to_linear(10.0))?, LinkBudget::equal(1.0)?, turbulence)?;

    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "dB", "product", "expansion", "series", "asymptotic");
    for db in (12..=60).step_by(6) {
        let cfg = base.with_mean_snr(db_to_linear(db as f64))?;
        let series = match outage_gg_pe_series(&cfg, DEFAULT_TRUNCATION) {
            Ok(r) => format!("{:14.6e}", r.value),
            Err(_) => format!("{:>14}", "flagged"),
        };
        println!(
            "{db:>6} {:14.6e} {:14.6e} {series} {:14.6e}",
            cfg.end_to_end_outage()?,
            outage_gg_pe(&cfg)?.value,
            outage_asymptotic(&cfg)?.value,
        );
    }
    Ok(())
}
