//! Building blocks shared by the expanded outage and BER evaluators.
//!
//! Every expansion has the shape `1 + Σ_t W_t · G_t`, where `W_t` collects
//! the RF part `Σ_{k,u} Ω e^{−(k+u)γ/γ̄_RF}` (or its Laplace transform) and
//! `G_t` is the t-th power of the FSO CDF (or its series/asymptotic form).
//! At high SNR `W_t` is a high-order finite difference whose value is many
//! orders of magnitude below its terms, so it is formed in double-double
//! arithmetic; `G_t` carries no such cancellation.

use crate::channel::SeriesCoefficients;
use crate::error::Result;
use crate::special::{binomial, ln_gamma, series_mul, series_pow, DoubleDouble, PowerSeries};

use super::for_each_omega;

/// `W_t = Σ_{k,u} Ω(k,t,u) (1 − q)^{k+u}` for `t = 0..=m`, where
/// `q = 1 − e^{−γ/γ̄_RF}` is the RF CDF at the threshold.
pub(crate) fn rf_weights(n: u32, m: u32, rf_cdf: f64) -> Vec<DoubleDouble> {
    let survival = DoubleDouble::from_sum(1.0, -rf_cdf);
    let powers: Vec<DoubleDouble> = (0..=n + m).map(|j| survival.powi(j)).collect();
    let mut weights = vec![DoubleDouble::ZERO; m as usize + 1];
    for_each_omega(n, m, |k, t, u, omega| {
        weights[t as usize] = weights[t as usize] + powers[(k + u) as usize] * omega;
    });
    weights
}

/// `1 + Σ_t W_t G_t` in double-double, with the largest `|W_t G_t|` for the
/// cancellation diagnostic.
pub(crate) fn combine(weights: &[DoubleDouble], fso_powers: &[DoubleDouble]) -> (DoubleDouble, f64) {
    let mut total = DoubleDouble::ONE;
    let mut largest: f64 = 1.0;
    for (w, g) in weights.iter().zip(fso_powers) {
        let term = *w * *g;
        largest = largest.max(term.to_f64().abs());
        total = total + term;
    }
    (total, largest)
}

/// Laplace transforms of the RF factors: `D_t(p) = Σ_{k,u} Ω(k,t,u) a_{k+u}^{−(p+1)}`
/// with `a_j = 1 + j/γ̄_RF`, i.e. `∫₀^∞ e^{−γ} Σ Ω e^{−(k+u)γ/γ̄_RF} γ^p dγ / Γ(p+1)`.
pub(crate) struct LaplaceWeights {
    n: u32,
    m: u32,
    ln_a: Vec<DoubleDouble>,
}

impl LaplaceWeights {
    pub(crate) fn new(n: u32, m: u32, mean_snr_rf: f64) -> Self {
        let inv = DoubleDouble::ONE / DoubleDouble::new(mean_snr_rf);
        let ln_a = (0..=n + m).map(|j| (DoubleDouble::ONE + inv * j as f64).ln()).collect();
        Self { n, m, ln_a }
    }

    /// `D_t(p)` for one relay-power index `t`.
    pub(crate) fn weight(&self, t: u32, p: f64) -> DoubleDouble {
        let exponent = DoubleDouble::new(-(p + 1.0));
        let mut total = DoubleDouble::ZERO;
        for k in 1..=self.n {
            for u in 0..=t {
                let sign = if (k + t + u) % 2 == 0 { 1.0 } else { -1.0 };
                let omega = sign * binomial(self.n, k) * binomial(self.m, t) * binomial(t, u);
                total = total + (exponent * self.ln_a[(k + u) as usize]).exp() * omega;
            }
        }
        total
    }

}

/// One product term of the FSO CDF power `F^t`:
/// `C(t,k₁) C(k₁,k₂) X₀^{t−k₁} r^{ξ²(t−k₁)/2} (Y^{k₁−k₂} ∗ Z^{k₂})(r)`,
/// together with the same product built from absolute coefficients, which
/// bounds the rounding error of the Cauchy products.
pub(crate) struct Piece {
    pub series: PowerSeries,
    pub magnitude: PowerSeries,
}

/// All pieces of `F^t` for `t = 0..=m`.
pub(crate) fn fso_powers(coefficients: &SeriesCoefficients, m: u32, truncation: usize) -> Result<Vec<Vec<Piece>>> {
    let abs = |s: &PowerSeries| {
        PowerSeries::new(s.exponent_offset(), s.step(), s.coefficients().iter().map(|c| c.abs()).collect())
    };
    let (y, z) = (coefficients.y_series(), coefficients.z_series());
    let (y_abs, z_abs) = (abs(&y)?, abs(&z)?);
    let x0 = coefficients.x0();
    let xi2_half = coefficients.x0_series().exponent_offset();
    let mut out = Vec::with_capacity(m as usize + 1);
    for t in 0..=m {
        let mut pieces = Vec::new();
        for k1 in 0..=t {
            for k2 in 0..=k1 {
                let weight = binomial(t, k1) * binomial(k1, k2) * x0.powi((t - k1) as i32);
                let shift = xi2_half * (t - k1) as f64;
                let product = |a: &PowerSeries, b: &PowerSeries| -> Result<PowerSeries> {
                    series_mul(&series_pow(a, k1 - k2, truncation)?, &series_pow(b, k2, truncation)?, truncation)
                };
                let rescale = |s: PowerSeries, w: f64| {
                    PowerSeries::new(s.exponent_offset() + shift, s.step(), s.coefficients().iter().map(|c| c * w).collect())
                };
                pieces.push(Piece {
                    series: rescale(product(&y, &z)?, weight)?,
                    magnitude: rescale(product(&y_abs, &z_abs)?, weight.abs())?,
                });
            }
        }
        out.push(pieces);
    }
    Ok(out)
}

/// Value of a series term `c · r^p` formed in log space.
pub(crate) fn term(c: f64, p: f64, ln_r: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else if p == 0.0 {
        c
    } else {
        c.signum() * (c.abs().ln() + p * ln_r).exp()
    }
}

/// `c · Γ(p+1) · γ̄^{−p}`: the Laplace transform of `c (γ/γ̄)^p` without the
/// `a^{−(p+1)}` factor.
pub(crate) fn laplace_term(c: f64, p: f64, ln_mean: f64) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(c.signum() * (c.abs().ln() + ln_gamma(p + 1.0)? - p * ln_mean).exp())
}

/// Rounding bound factor for a coefficient produced by nested Cauchy products.
pub(crate) fn product_rounding(t: u32) -> f64 {
    16.0 * f64::EPSILON * (t as f64 + 1.0)
}
