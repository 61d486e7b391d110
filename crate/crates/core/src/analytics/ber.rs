use crate::error::{domain, Error, Result};
use crate::special::{binomial, laplace_quadrature, ln_gamma, DoubleDouble, QuadratureSpec};
use crate::system::SystemConfig;

use super::expansion::{fso_powers, laplace_term, product_rounding, LaplaceWeights};
use super::outage::{gamma_gamma, negative_exponential, SERIES_ERROR_TOLERANCE, SERIES_TAIL_TOLERANCE};
use super::{for_each_omega, Diagnostics, EvalResult, Method};

/// DPSK bit-error rate `½∫₀^∞ e^{−γ} P_out(γ) dγ`, with the end-to-end outage
/// probability evaluated at threshold `γ` as the integrand.
pub fn ber_dpsk_quadrature(cfg: &SystemConfig, spec: &QuadratureSpec) -> Result<EvalResult> {
    let outcome = laplace_quadrature(|g| cfg.outage_at(g).unwrap_or(f64::NAN), spec)?;
    Ok(EvalResult::new(
        (0.5 * outcome.value).clamp(0.0, 0.5),
        Method::Quadrature,
        Diagnostics {
            error_estimate: Some(0.5 * outcome.error_estimate),
            evaluations: Some(outcome.evaluations),
            ..Diagnostics::default()
        },
    ))
}

/// `∫₀^∞ e^{−aγ − b√γ} dγ = 1/a − (b√π / (2a^{3/2})) e^{b²/(4a)} erfc(b/(2√a))`
/// for `a > 0`, `b ≥ 0`.
pub fn laplace_exp_sqrt(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) || !(b >= 0.0 && b.is_finite()) {
        return Err(domain(format!("laplace_exp_sqrt needs a > 0 and b ≥ 0, got a={a}, b={b}")));
    }
    Ok(laplace_exp_sqrt_dd(DoubleDouble::new(a), DoubleDouble::new(b)).to_f64())
}

// Below this argument `√π y erfcx(y)` comes from its power series, above it
// `1 − √π y erfcx(y)` from the Laplace continued fraction.
const ERFCX_SERIES_LIMIT: f64 = 2.0;

/// `(1/a)(1 − √π y e^{y²} erfc(y))`, `y = b/(2√a)`, in double-double.
///
/// For `y ≤ 2` the identity `√π y e^{y²} erfc(y) = √π y e^{y²} − 2y² Σₙ (2y²)ⁿ/(2n+1)!!`
/// needs only positive series terms; beyond that the continued fraction
/// `√π e^{y²} erfc(y) = 1/(y + ½/(y + 1/(y + 3/2/(y + …))))` gives
/// `1 − √π y erfcx(y) = tail/(y + tail)` without cancellation.
pub(crate) fn laplace_exp_sqrt_dd(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
    if b.hi() == 0.0 {
        return a.recip();
    }
    let y = b / (a.sqrt() * 2.0);
    let complement = if y.hi() <= ERFCX_SERIES_LIMIT {
        erfcx_complement_series(y)
    } else {
        erfcx_complement_fraction(y.to_f64())
    };
    complement / a
}

/// `1 − √π y erfcx(y)` from `√π y e^{y²} − 2y² Σₙ (2y²)ⁿ/(2n+1)!!`.
fn erfcx_complement_series(y: DoubleDouble) -> DoubleDouble {
    let y2 = y * y;
    let z = y2 * 2.0;
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    for n in 1..200 {
        term = term * z / (2 * n + 1) as f64;
        sum = sum + term;
        if term.hi() < 1e-34 * sum.hi() {
            break;
        }
    }
    DoubleDouble::ONE - (DoubleDouble::pi().sqrt() * y * y2.exp() - z * sum)
}

/// `1 − √π y erfcx(y) = tail/(y + tail)` from the continued fraction.
fn erfcx_complement_fraction(y: f64) -> DoubleDouble {
    let mut tail = 0.0;
    for k in (1..=400).rev() {
        tail = (k as f64 / 2.0) / (y + tail);
    }
    DoubleDouble::new(tail / (y + tail))
}

/// Closed-form BER for Negative-Exponential turbulence: the quadruple
/// expansion of the outage probability transformed term by term,
/// `½(1 + Σ Λ L(1 + (k+u)/γ̄_RF, λv/√γ̄_FSO))` with `L(a,b) = ∫e^{−aγ−b√γ}dγ`.
pub fn ber_negexp_closed(cfg: &SystemConfig) -> Result<EvalResult> {
    let ch = negative_exponential(cfg, "ber_negexp_closed")?;
    let topo = cfg.topology();
    let (n, m) = (topo.n_antennas, topo.n_relays);
    let inv_rf = DoubleDouble::ONE / DoubleDouble::new(cfg.budget().mean_snr_rf);
    let b_unit = DoubleDouble::new(ch.lambda()) / DoubleDouble::new(ch.mean_snr()).sqrt();
    // L depends on (k+u, v) only
    let table: Vec<Vec<DoubleDouble>> = (0..=n + m)
        .map(|j| {
            let a = DoubleDouble::ONE + inv_rf * j as f64;
            (0..=m).map(|v| laplace_exp_sqrt_dd(a, b_unit * v as f64)).collect()
        })
        .collect();
    let mut total = DoubleDouble::ONE;
    let mut largest: f64 = 1.0;
    for_each_omega(n, m, |k, t, u, omega| {
        for v in 0..=t {
            let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
            let term = table[(k + u) as usize][v as usize] * (omega * sign * binomial(t, v));
            largest = largest.max(term.to_f64().abs());
            total = total + term;
        }
    });
    let value = 0.5 * total.to_f64();
    Ok(EvalResult::new(
        value.clamp(0.0, 0.5),
        Method::Closed,
        Diagnostics { cancellation: Some(0.5 * largest / value.abs()), ..Diagnostics::default() },
    ))
}

/// Series BER for Gamma-Gamma/pointing-error turbulence: every term
/// `c (γ/γ̄_FSO)^p e^{−(k+u)γ/γ̄_RF}` of the series outage expansion is
/// integrated exactly, `∫e^{−γ} … = c Γ(p+1) γ̄_FSO^{−p} / (1 + (k+u)/γ̄_RF)^{p+1}`.
///
/// The error estimate adds the last retained term of every truncated
/// product to a rounding bound on the coefficients; points where it
/// exceeds `10⁻⁸` of the result are returned as errors.
pub fn ber_gg_pe_series(cfg: &SystemConfig, truncation: usize) -> Result<EvalResult> {
    let ch = gamma_gamma(cfg, "ber_gg_pe_series")?;
    let topo = cfg.topology();
    let coefficients = ch.series_coefficients(truncation)?;
    let pieces = fso_powers(&coefficients, topo.n_relays, truncation)?;
    let laplace = LaplaceWeights::new(topo.n_antennas, topo.n_relays, cfg.budget().mean_snr_rf);
    let ln_mean = ch.mean_snr().ln();

    let mut total = DoubleDouble::ONE;
    let mut largest: f64 = 1.0;
    let (mut tail, mut rounding) = (0.0, 0.0);
    // t = 0 carries no FSO factor: its single term is exact
    total = total + laplace.weight(0, 0.0);
    for (t, per_t) in pieces.iter().enumerate().skip(1) {
        let t = t as u32;
        for piece in per_t {
            let coeffs = piece.series.coefficients();
            for (i, (&c, &mag)) in coeffs.iter().zip(piece.magnitude.coefficients()).enumerate() {
                let p = piece.series.exponent(i);
                let front = laplace_term(c, p, ln_mean)?;
                let front_mag = laplace_term(mag, p, ln_mean)?;
                if front_mag == 0.0 {
                    continue;
                }
                let d = laplace.weight(t, p);
                let contribution = d * front;
                let size = contribution.to_f64().abs();
                total = total + contribution;
                largest = largest.max(size);
                rounding += product_rounding(t) * front_mag * d.to_f64().abs();
                if i + 1 == truncation {
                    tail += size;
                }
            }
        }
    }
    let value = 0.5 * total.to_f64();
    let (tail, rounding) = (0.5 * tail, 0.5 * rounding);
    if !(tail <= SERIES_TAIL_TOLERANCE * value.abs()) {
        return Err(Error::SeriesDivergence { terms: truncation, ratio: tail / value.abs() });
    }
    let error = tail + rounding;
    if !(error <= SERIES_ERROR_TOLERANCE * value.abs()) {
        return Err(Error::Cancellation { bound: error, value });
    }
    Ok(EvalResult::new(
        value.clamp(0.0, 0.5),
        Method::Series,
        Diagnostics {
            terms_used: Some(truncation),
            error_estimate: Some(error),
            cancellation: Some(0.5 * largest / value.abs()),
            ..Diagnostics::default()
        },
    ))
}

/// High-SNR BER: the FSO CDF is replaced by its leading power law `c γ^e`,
/// so each term integrates to `c^t Γ(et+1) / (1 + (k+u)/γ̄_RF)^{et+1}`; the
/// global `½` of the DPSK average is kept.
pub fn ber_gg_pe_asymptotic(cfg: &SystemConfig) -> Result<EvalResult> {
    let ch = gamma_gamma(cfg, "ber_gg_pe_asymptotic")?;
    let branch = ch.asymptotic_branch()?;
    let topo = cfg.topology();
    let laplace = LaplaceWeights::new(topo.n_antennas, topo.n_relays, cfg.budget().mean_snr_rf);
    let ln_c = branch.coefficient.ln();
    let mut total = DoubleDouble::ONE;
    let mut largest: f64 = 1.0;
    for t in 0..=topo.n_relays {
        let p = branch.exponent * t as f64;
        let front = (t as f64 * ln_c + ln_gamma(p + 1.0)?).exp();
        let term = laplace.weight(t, p) * front;
        largest = largest.max(term.to_f64().abs());
        total = total + term;
    }
    let value = 0.5 * total.to_f64();
    Ok(EvalResult::new(
        value.clamp(0.0, 0.5),
        Method::Asymptotic,
        Diagnostics {
            cancellation: Some(0.5 * largest / value.abs()),
            branch: Some(branch.branch),
            ..Diagnostics::default()
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{LinkBudget, Topology, TurbulenceParams};
    use approx::assert_relative_eq;

    const MODERATE: TurbulenceParams = TurbulenceParams::GammaGammaPe { alpha: 4.0, beta: 1.9, xi: 10.45, kappa: None };
    const NEGEXP: TurbulenceParams = TurbulenceParams::NegExp { lambda: 1.0 };

    fn cfg(n: u32, m: u32, mean: f64, turbulence: TurbulenceParams) -> SystemConfig {
        SystemConfig::new(Topology::new(n, m, 10.0).unwrap(), LinkBudget::equal(mean).unwrap(), turbulence).unwrap()
    }

    // mpmath quadrature of e^{−aγ−b√γ}
    #[test]
    fn laplace_exp_sqrt_values() {
        let cases = [
            (1.5, 0.1, 0.620_570_808_857_598_862_6),
            (2.0, 3.0, 0.113_138_271_336_527_483_7),
            (1.0001, 1e-3, 0.999_014_415_669_568_281_2),
            (3.0, 10.0, 0.017_177_960_621_871_985_45),
        ];
        for (a, b, want) in cases {
            assert_relative_eq!(laplace_exp_sqrt(a, b).unwrap(), want, max_relative = 1e-15);
        }
        assert_eq!(laplace_exp_sqrt(4.0, 0.0).unwrap(), 0.25);
        assert!(laplace_exp_sqrt(0.0, 1.0).is_err());
    }

    #[test]
    fn erfcx_complement_agrees_at_the_switch() {
        // mpmath: 1 − √π·2·e⁴·erfc(2)
        let want = 0.094_645_900_037_650_841_27;
        assert_relative_eq!(erfcx_complement_series(DoubleDouble::new(2.0)).to_f64(), want, max_relative = 1e-15);
        assert_relative_eq!(erfcx_complement_fraction(2.0).to_f64(), want, max_relative = 1e-15);
    }

    #[test]
    fn rayleigh_only_dpsk() {
        let spec = QuadratureSpec::default();
        let one = cfg(1, 0, 1.0, NEGEXP);
        assert_relative_eq!(ber_dpsk_quadrature(&one, &spec).unwrap().value, 0.25, max_relative = 1e-12);
        assert_relative_eq!(ber_negexp_closed(&one).unwrap().value, 0.25, max_relative = 1e-15);
        let ten = cfg(1, 0, 10.0, MODERATE);
        assert_relative_eq!(ber_dpsk_quadrature(&ten, &spec).unwrap().value, 1.0 / 22.0, max_relative = 1e-12);
        assert_relative_eq!(ber_gg_pe_series(&ten, 60).unwrap().value, 1.0 / 22.0, max_relative = 1e-14);
        assert_relative_eq!(ber_gg_pe_asymptotic(&ten).unwrap().value, 1.0 / 22.0, max_relative = 1e-14);
    }

    #[test]
    fn negexp_closed_matches_quadrature_at_20_db() {
        let c = cfg(2, 2, 100.0, NEGEXP);
        let q = ber_dpsk_quadrature(&c, &QuadratureSpec { absolute_tolerance: 1e-300, ..QuadratureSpec::default() }).unwrap();
        assert_relative_eq!(ber_negexp_closed(&c).unwrap().value, q.value, max_relative = 1e-10);
    }

    #[test]
    fn series_matches_quadrature_at_30_db() {
        let c = cfg(2, 2, 1000.0, MODERATE);
        let q = ber_dpsk_quadrature(&c, &QuadratureSpec { absolute_tolerance: 1e-300, ..QuadratureSpec::default() }).unwrap();
        let s = ber_gg_pe_series(&c, 60).unwrap();
        assert_relative_eq!(s.value, q.value, max_relative = 1e-6);
        let s30 = ber_gg_pe_series(&c, 30).unwrap();
        assert!((s30.value - s.value).abs() < 1e-8 * s.value);
    }
}
