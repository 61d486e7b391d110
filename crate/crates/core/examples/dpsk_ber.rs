//! DPSK bit-error rate: the closed form for Negative-Exponential
//! turbulence, the Laplace-series and asymptotic forms for Gamma-Gamma
//! turbulence, and the quadrature reference for both.
//!
//!     cargo run --example dpsk_ber

use linklab::analytics::{ber_dpsk_quadrature, ber_gg_pe_asymptotic, ber_gg_pe_series, ber_negexp_closed};
use linklab::channel::DEFAULT_TRUNCATION;
use linklab::special::QuadratureSpec;
use linklab::system::{LinkBudget, SystemConfig, Topology, TurbulenceParams};
use linklab::{db_to_linear, Result};

fn main() -> Result<()> {
    let quad = QuadratureSpec::default();
    let topology = Topology::new(2, 2, 0.0)?;
    let negexp = SystemConfig::new(topology, LinkBudget::equal(1.0)?, TurbulenceParams::NegExp { lambda: 1.0 })?;
    let strong = TurbulenceParams::GammaGammaPe { alpha: 4.2, beta: 1.4, xi: 2.45, kappa: None };
    let gg = SystemConfig::new(topology, LinkBudget::equal(1.0)?, strong)?;

    println!("{:>4} | {:>12} {:>12} | {:>12} {:>12} {:>12}", "dB", "negexp", "quadrature", "gg series", "asymptotic", "quadrature");
    for db in (0..=50).step_by(5) {
        let mean = db_to_linear(db as f64);
        let (ne, g) = (negexp.with_mean_snr(mean)?, gg.with_mean_snr(mean)?);
        let series = ber_gg_pe_series(&g, DEFAULT_TRUNCATION)
            .map(|r| format!("{:12.5e}", r.value))
            .unwrap_or_else(|e| format!("{:>12}", if matches!(e, linklab::Error::Cancellation { .. }) { "cancelled" } else { "flagged" }));
        println!(
            "{db:>4} | {:12.5e} {:12.5e} | {series} {:12.5e} {:12.5e}",
            ber_negexp_closed(&ne)?.value,
            ber_dpsk_quadrature(&ne, &quad)?.value,
            ber_gg_pe_asymptotic(&g)?.value,
            ber_dpsk_quadrature(&g, &quad)?.value,
        );
    }
    Ok(())
}
