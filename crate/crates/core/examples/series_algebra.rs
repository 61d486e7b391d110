//! Truncated power series with fractional exponents: products, powers and
//! the Gamma-Gamma CDF coefficient ladders built on them.
//!
//!     cargo run --example series_algebra

use linklab::channel::GammaGammaPe;
use linklab::special::{series_mul, series_pow, PowerSeries};

fn main() -> linklab::Result<()> {
    // e^x truncated, squared, against e^{2x}
    let exp: Vec<f64> = (0..12).scan(1.0, |f, n| {
        let term = 1.0 / *f;
        *f *= (n + 1) as f64;
        Some(term)
    }).collect();
    let s = PowerSeries::new(0.0, 1.0, exp)?;
    let sq = series_pow(&s, 2, 12)?;
    println!("(e^x)² at x = 0.3: {:.15} (e^0.6 = {:.15})", sq.eval(0.3), 0.6f64.exp());

    // √x · (1 + x) with half-integer steps
    let a = PowerSeries::new(0.5, 0.5, vec![1.0])?;
    let b = PowerSeries::new(0.0, 0.5, vec![1.0, 0.0, 1.0])?;
    let p = series_mul(&a, &b, 4)?;
    println!("√x(1 + x): offset {}, coefficients {:?}", p.exponent_offset(), p.coefficients());

    let ch = GammaGammaPe::new(4.0, 1.9, 10.45, 1.0)?;
    let c = ch.series_coefficients(8)?;
    println!("\nmoderate Gamma-Gamma CDF: X₀ = {:.6e}", c.x0());
    for (n, (y, z)) in c.y().iter().zip(c.z()).enumerate() {
        println!("  n = {n}: Y = {y:+.6e}, Z = {z:+.6e}");
    }
    Ok(())
}
