use crate::channel::{FsoModel, GammaGammaPe, NegExp, CONVERGENCE_RADIUS};
use crate::error::{Error, Result};
use crate::special::{binomial, CompensatedSum, DoubleDouble};
use crate::system::SystemConfig;

use super::expansion::{combine, fso_powers, product_rounding, rf_weights, term};
use super::{Diagnostics, EvalResult, Method};

/// Truncation-tail bound (relative to the result) above which a series
/// evaluation is reported as not converged.
pub(crate) const SERIES_TAIL_TOLERANCE: f64 = 1e-10;
/// Combined error bound (relative to the result) above which a series
/// evaluation is reported as lost to cancellation.
pub(crate) const SERIES_ERROR_TOLERANCE: f64 = 1e-8;

pub(crate) fn gamma_gamma<'a>(cfg: &'a SystemConfig, method: &'static str) -> Result<&'a GammaGammaPe> {
    match cfg.fso() {
        FsoModel::GammaGammaPe(ch) => Ok(ch),
        other => Err(Error::Unsupported { method, what: format!("{} turbulence", other.name()) }),
    }
}

pub(crate) fn negative_exponential<'a>(cfg: &'a SystemConfig, method: &'static str) -> Result<&'a NegExp> {
    match cfg.fso() {
        FsoModel::NegExp(ch) => Ok(ch),
        other => Err(Error::Unsupported { method, what: format!("{} turbulence", other.name()) }),
    }
}

fn zero(method: Method) -> EvalResult {
    EvalResult::new(0.0, method, Diagnostics { cancellation: Some(1.0), ..Diagnostics::default() })
}

fn cancellation(largest: f64, value: f64) -> f64 {
    if value == 0.0 {
        f64::INFINITY
    } else {
        largest / value.abs()
    }
}

/// Outage probability from the triple binomial expansion
/// `1 + Σ_{k,t,u} Ω e^{−(k+u)γ_th/γ̄_RF} F_FSO(γ_th)^t` with the
/// Gamma-Gamma/pointing-error CDF.
pub fn outage_gg_pe(cfg: &SystemConfig) -> Result<EvalResult> {
    let ch = gamma_gamma(cfg, "outage_gg_pe")?;
    let topo = cfg.topology();
    let th = topo.threshold_snr;
    if th == 0.0 {
        return Ok(zero(Method::Closed));
    }
    let fso = DoubleDouble::new(ch.cdf(th)?);
    let weights = rf_weights(topo.n_antennas, topo.n_relays, cfg.rf().cdf(th)?);
    let powers: Vec<DoubleDouble> = (0..=topo.n_relays).map(|t| fso.powi(t)).collect();
    let (total, largest) = combine(&weights, &powers);
    let value = total.to_f64();
    Ok(EvalResult::new(
        value.clamp(0.0, 1.0),
        Method::Closed,
        Diagnostics { cancellation: Some(cancellation(largest, value)), ..Diagnostics::default() },
    ))
}

/// Outage probability from the quadruple expansion
/// `1 + Σ_{k,t,u,v} Λ e^{−(k+u)γ_th/γ̄_RF} e^{−λv√(γ_th/γ̄_FSO)}` for
/// Negative-Exponential turbulence.
pub fn outage_negexp(cfg: &SystemConfig) -> Result<EvalResult> {
    let ch = negative_exponential(cfg, "outage_negexp")?;
    let topo = cfg.topology();
    let th = topo.threshold_snr;
    if th == 0.0 {
        return Ok(zero(Method::Closed));
    }
    // e^{−λ√(γ/γ̄)} = 1 − F_FSO, exact in double-double
    let fso_survival = DoubleDouble::from_sum(1.0, -ch.cdf(th)?);
    let weights = rf_weights(topo.n_antennas, topo.n_relays, cfg.rf().cdf(th)?);
    let powers: Vec<DoubleDouble> = (0..=topo.n_relays)
        .map(|t| {
            (0..=t)
                .map(|v| {
                    let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
                    fso_survival.powi(v) * (sign * binomial(t, v))
                })
                .sum()
        })
        .collect();
    let (total, largest) = combine(&weights, &powers);
    let value = total.to_f64();
    Ok(EvalResult::new(
        value.clamp(0.0, 1.0),
        Method::Closed,
        Diagnostics { cancellation: Some(cancellation(largest, value)), ..Diagnostics::default() },
    ))
}

/// Outage probability with every power of the FSO CDF replaced by the
/// product of its power series,
/// `F^t = Σ_{k₁,k₂} C(t,k₁)C(k₁,k₂) X₀^{t−k₁} r^{ξ²(t−k₁)/2} (Y^{k₁−k₂} ∗ Z^{k₂})(r)`,
/// `r = γ_th/γ̄_FSO`, each product truncated after `truncation` terms.
///
/// Fails outside the series convergence radius, when the retained tail is
/// not below `10⁻¹⁰` of the result, and when tail plus rounding exceed
/// `10⁻⁸` of it.
pub fn outage_gg_pe_series(cfg: &SystemConfig, truncation: usize) -> Result<EvalResult> {
    let ch = gamma_gamma(cfg, "outage_gg_pe_series")?;
    let topo = cfg.topology();
    let th = topo.threshold_snr;
    let argument = ch.argument(th);
    if argument > CONVERGENCE_RADIUS {
        return Err(Error::OutsideConvergence { argument, radius: CONVERGENCE_RADIUS });
    }
    if th == 0.0 {
        let mut r = zero(Method::Series);
        r.diagnostics.terms_used = Some(truncation);
        r.diagnostics.error_estimate = Some(0.0);
        return Ok(r);
    }
    let coefficients = ch.series_coefficients(truncation)?;
    let pieces = fso_powers(&coefficients, topo.n_relays, truncation)?;
    let weights = rf_weights(topo.n_antennas, topo.n_relays, cfg.rf().cdf(th)?);
    let ln_r = (th / ch.mean_snr()).ln();

    // F⁰ = 1 exactly
    let mut powers = vec![DoubleDouble::ONE];
    let (mut tail, mut rounding) = (0.0, 0.0);
    for (t, (per_t, w)) in pieces.iter().zip(&weights).enumerate().skip(1) {
        let mut acc = CompensatedSum::new();
        let (mut tail_t, mut rounding_t) = (0.0, 0.0);
        for piece in per_t {
            let coeffs = piece.series.coefficients();
            for (i, (&c, &mag)) in coeffs.iter().zip(piece.magnitude.coefficients()).enumerate() {
                let p = piece.series.exponent(i);
                let x = term(c, p, ln_r);
                acc.add(x);
                rounding_t += product_rounding(t as u32) * term(mag, p, ln_r);
                if i + 1 == truncation {
                    tail_t += x.abs();
                }
            }
        }
        rounding_t += acc.rounding_error();
        let scale = w.to_f64().abs();
        tail += scale * tail_t;
        rounding += scale * rounding_t;
        powers.push(DoubleDouble::new(acc.value()));
    }
    let (total, largest) = combine(&weights, &powers);
    let value = total.to_f64();
    if !(tail <= SERIES_TAIL_TOLERANCE * value.abs()) {
        return Err(Error::SeriesDivergence { terms: truncation, ratio: tail / value.abs() });
    }
    let error = tail + rounding;
    if !(error <= SERIES_ERROR_TOLERANCE * value.abs()) {
        return Err(Error::Cancellation { bound: error, value });
    }
    Ok(EvalResult::new(
        value.clamp(0.0, 1.0),
        Method::Series,
        Diagnostics {
            terms_used: Some(truncation),
            error_estimate: Some(error),
            cancellation: Some(cancellation(largest, value)),
            ..Diagnostics::default()
        },
    ))
}

/// High-SNR outage: the FSO CDF in the expansion is replaced by its leading
/// small-argument power law `c·γ_th^e` of the dominating branch. The raw
/// expansion is clamped to `[0, 1]`.
pub fn outage_asymptotic(cfg: &SystemConfig) -> Result<EvalResult> {
    let ch = gamma_gamma(cfg, "outage_asymptotic")?;
    let branch = ch.asymptotic_branch()?;
    let topo = cfg.topology();
    let th = topo.threshold_snr;
    let diagnostics = Diagnostics { branch: Some(branch.branch), ..Diagnostics::default() };
    if th == 0.0 {
        return Ok(EvalResult::new(0.0, Method::Asymptotic, diagnostics));
    }
    let leading = DoubleDouble::new(branch.coefficient * th.powf(branch.exponent));
    let weights = rf_weights(topo.n_antennas, topo.n_relays, cfg.rf().cdf(th)?);
    let powers: Vec<DoubleDouble> = (0..=topo.n_relays).map(|t| leading.powi(t)).collect();
    let (total, largest) = combine(&weights, &powers);
    let value = total.to_f64();
    Ok(EvalResult::new(
        value.clamp(0.0, 1.0),
        Method::Asymptotic,
        Diagnostics { cancellation: Some(cancellation(largest, value)), ..diagnostics },
    ))
}
