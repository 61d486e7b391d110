//! Monte-Carlo outage and BER against the analytical values, including the
//! two per-trial error models for the BER.
//!
//!     cargo run --release --example monte_carlo

use linklab::analytics::{ber_dpsk_quadrature, outage_gg_pe};
use linklab::montecarlo::{simulate_ber, simulate_outage, BerMode, McSpec};
use linklab::special::QuadratureSpec;
use linklab::system::{LinkBudget, SystemConfig, Topology, TurbulenceParams};
use linklab::{db_to_linear, Result};

fn main() -> Result<()> {
    let turbulence = TurbulenceParams::GammaGammaPe { alpha: 4.0, beta: 1.9, xi: 10.45, kappa: None };
    let base = SystemConfig::new(Topology::new(2, 2, db_to_linear(10.0))?, LinkBudget::equal(1.0)?, turbulence)?;
    let spec = McSpec::new(1_000_000, 42);

    println!("{:>4} {:>12} {:>22} | {:>12} {:>22} {:>12}", "dB", "outage", "mc", "ber", "mc (min-hop)", "mc (xor)");
    for db in (10..=30).step_by(5) {
        let cfg = base.with_mean_snr(db_to_linear(db as f64))?;
        let out = simulate_outage(&cfg, &spec)?;
        let min_hop = simulate_ber(&cfg, &spec)?;
        let xor = simulate_ber(&cfg, &spec.with_ber_mode(BerMode::CascadeXor))?;
        println!(
            "{db:>4} {:12.5e} {:12.5e} ± {:7.1e} | {:12.5e} {:12.5e} ± {:7.1e} {:12.5e}",
            outage_gg_pe(&cfg)?.value,
            out.mean,
            out.half_width_95,
            ber_dpsk_quadrature(&cfg, &QuadratureSpec::default())?.value,
            min_hop.mean,
            min_hop.half_width_95,
            xor.mean,
        );
    }
    Ok(())
}
