use crate::error::{domain, Result};

/// A truncated generalized power series `Σᵢ cᵢ x^{offset + i·step}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    exponent_offset: f64,
    step: f64,
    coefficients: Vec<f64>,
}

impl PowerSeries {
    pub fn new(exponent_offset: f64, step: f64, coefficients: Vec<f64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(domain(format!("power-series step must be positive, got {step}")));
        }
        if !exponent_offset.is_finite() {
            return Err(domain("power-series exponent offset must be finite"));
        }
        if coefficients.is_empty() {
            return Err(domain("power series needs at least one coefficient"));
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(domain(format!("power-series coefficient {bad} is not finite")));
        }
        Ok(Self { exponent_offset, step, coefficients })
    }

    /// The constant series `1`.
    pub fn one(step: f64) -> Self {
        Self { exponent_offset: 0.0, step, coefficients: vec![1.0] }
    }

    pub fn exponent_offset(&self) -> f64 {
        self.exponent_offset
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Exponent attached to coefficient `i`.
    pub fn exponent(&self, i: usize) -> f64 {
        self.exponent_offset + i as f64 * self.step
    }

    /// Evaluates the series at `x > 0` (or `x = 0`, where `0^0 = 1`).
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = super::CompensatedSum::new();
        for (i, &c) in self.coefficients.iter().enumerate() {
            let p = self.exponent(i);
            let xp = if p == 0.0 { 1.0 } else { x.powf(p) };
            acc.add(c * xp);
        }
        acc.value()
    }

    fn same_step(&self, other: &Self) -> bool {
        (self.step - other.step).abs() <= 1e-12 * self.step.abs().max(other.step.abs())
    }
}

/// Truncated Cauchy product of two series sharing a step; offsets add.
pub fn series_mul(a: &PowerSeries, b: &PowerSeries, truncation: usize) -> Result<PowerSeries> {
    if truncation == 0 {
        return Err(domain("truncation must be at least 1"));
    }
    if !a.same_step(b) {
        return Err(domain(format!("step mismatch: {} vs {}", a.step, b.step)));
    }
    let len = truncation.min(a.coefficients.len() + b.coefficients.len() - 1);
    let mut out = vec![0.0; len];
    for (i, &ai) in a.coefficients.iter().enumerate().take(len) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.coefficients.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    Ok(PowerSeries {
        exponent_offset: a.exponent_offset + b.exponent_offset,
        step: a.step,
        coefficients: out,
    })
}

/// k-th power by repeated squaring; `k = 0` gives the constant series 1.
pub fn series_pow(s: &PowerSeries, k: u32, truncation: usize) -> Result<PowerSeries> {
    if truncation == 0 {
        return Err(domain("truncation must be at least 1"));
    }
    let mut result = PowerSeries::one(s.step);
    let mut base = s.clone();
    base.coefficients.truncate(truncation);
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = series_mul(&result, &base, truncation)?;
        }
        k >>= 1;
        if k > 0 {
            base = series_mul(&base, &base, truncation)?;
        }
    }
    Ok(result)
}
