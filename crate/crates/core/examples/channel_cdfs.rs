//! Branch SNR distributions: Rayleigh RF, Negative-Exponential FSO and
//! Gamma-Gamma FSO with pointing error, the latter from both its power
//! series and the contour integral.
//!
//!     cargo run --example channel_cdfs

use linklab::channel::{GammaGammaPe, NegExp, RayleighRf, DEFAULT_TRUNCATION};

fn main() -> linklab::Result<()> {
    let mean = 10.0;
    let rf = RayleighRf::new(mean)?;
    let ne = NegExp::new(1.0, mean)?;
    let moderate = GammaGammaPe::new(4.0, 1.9, 10.45, mean)?;
    let strong = GammaGammaPe::new(4.2, 1.4, 2.45, mean)?;

    println!("mean SNR {mean}, CDF at γ:");
    println!("{:>10} {:>12} {:>12} {:>12} {:>12} {:>12}", "γ", "rayleigh", "negexp", "gg moderate", "gg contour", "gg strong");
    for gamma in [0.01, 0.1, 1.0, 3.0, 10.0, 30.0, 100.0] {
        let series = moderate.cdf_series(gamma, DEFAULT_TRUNCATION).map(|s| format!("{:12.6e}", s.value));
        println!(
            "{gamma:>10} {:12.6e} {:12.6e} {:>12} {:12.6e} {:12.6e}",
            rf.cdf(gamma)?,
            ne.cdf(gamma)?,
            series.unwrap_or_else(|_| "n/a".into()),
            1.0 - moderate.ccdf_contour(gamma)?,
            strong.cdf(gamma)?,
        );
    }

    let (branch, kappa) = (moderate.asymptotic_branch()?, moderate.kappa());
    println!("\nmoderate regime: κ = {kappa:.6}, small-γ law F ≈ {:.4e}·γ^{:.3} ({:?})", branch.coefficient, branch.exponent, branch.branch);
    Ok(())
}
