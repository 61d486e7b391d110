//! The numerical kernel: log-gamma, Pochhammer symbols, scaled erfc,
//! double-double arithmetic and Laplace-type quadrature.
//!
//!     cargo run --example special_functions

use linklab::special::{erfc, erfcx, laplace_quadrature, ln_gamma, pochhammer, tanh_sinh, DoubleDouble, QuadratureSpec};

fn main() -> linklab::Result<()> {
    println!("ln Γ(0.5) = {:.16} (ln √π = {:.16})", ln_gamma(0.5)?, std::f64::consts::PI.sqrt().ln());
    println!("(1.5)₄ = {}", pochhammer(1.5, 4));
    println!("erfc(3) = {:.6e}, erfcx(30) = {:.16}", erfc(3.0), erfcx(30.0));

    // (1 + x) − 1 with x below f64 resolution at 1
    let x = 1e-17;
    let dd = DoubleDouble::ONE + DoubleDouble::new(x) - DoubleDouble::ONE;
    println!("(1 + 1e-17) − 1: f64 {:e}, double-double {:e}", (1.0 + x) - 1.0, dd.to_f64());
    let e = DoubleDouble::ONE.exp();
    println!("e = {:.17} + {:.3e}", e.hi(), e.lo());

    let spec = QuadratureSpec::default();
    let smooth = laplace_quadrature(|g| 1.0 / (1.0 + g), &spec)?;
    println!("∫ e^-γ/(1+γ) dγ = {:.15} ({:?}, {} evaluations)", smooth.value, smooth.scheme, smooth.evaluations);
    let rough = laplace_quadrature(|g| g.sqrt(), &spec)?;
    println!("∫ e^-γ √γ dγ = {:.15} (Γ(1.5) = {:.15}, {:?})", rough.value, 0.886_226_925_452_758, rough.scheme);
    let finite = tanh_sinh(|x| (1.0 - x * x).sqrt(), -1.0, 1.0, 1e-14, 1e-16);
    println!("∫₋₁¹ √(1−x²) dx = {:.15} (π/2)", finite.value);
    Ok(())
}
