use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    ber_dpsk_quadrature, ber_gg_pe_asymptotic, ber_gg_pe_series, ber_negexp_closed, outage_asymptotic, outage_gg_pe,
    outage_gg_pe_series, outage_negexp, Diagnostics, EvalResult, Method,
};
use crate::channel::FsoModel;
use crate::montecarlo::{simulate_ber, simulate_outage, McEstimate};
use crate::system::{SystemConfig, TurbulenceParams};
use crate::Error;

use super::config::{CurveSpec, Quantity, RunConfig};
use super::HarnessError;

/// One evaluated (curve, method, sweep point).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub curve: String,
    pub method: Method,
    pub gamma_avg_db: f64,
    pub n_antennas: u32,
    pub n_relays: u32,
    pub gamma_th_db: Option<f64>,
    /// `None` when the evaluation failed; see `error`.
    pub value: Option<f64>,
    pub ci_halfwidth: Option<f64>,
    pub terms_used: Option<usize>,
    pub err_estimate: Option<f64>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The evaluator returned something that is not a probability.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fatal: bool,
}

/// A finished sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub config: RunConfig,
    pub seed: Option<u64>,
    /// `(curve, method)` pairs that were not evaluated because the method
    /// does not apply to the curve's model or quantity.
    pub skipped: Vec<String>,
    /// Sorted by method, then average SNR, then curve order.
    pub rows: Vec<Row>,
}

impl RunRecord {
    pub fn name(&self) -> &str {
        &self.config.name
    }

    pub fn has_fatal(&self) -> bool {
        self.rows.iter().any(|r| r.fatal)
    }

    /// Rows of one curve and method in sweep order.
    pub fn curve(&self, curve: &str, method: Method) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.curve == curve && r.method == method).collect()
    }

    /// Curve ids in config order.
    pub fn curve_ids(&self) -> Vec<&str> {
        self.config.curves.iter().map(|c| c.id.as_str()).collect()
    }
}

/// Whether `method` evaluates `quantity` for the given turbulence model.
pub fn supports(quantity: Quantity, turbulence: &TurbulenceParams, method: Method) -> bool {
    let gamma_gamma = matches!(turbulence, TurbulenceParams::GammaGammaPe { .. });
    match (quantity, method) {
        (_, Method::MonteCarlo) => true,
        (Quantity::Outage, Method::Closed) => true,
        (Quantity::Outage, Method::Series | Method::Asymptotic) => gamma_gamma,
        (Quantity::Outage, Method::Quadrature) => false,
        (Quantity::Ber, Method::Closed) => !gamma_gamma,
        (Quantity::Ber, Method::Series | Method::Asymptotic) => gamma_gamma,
        (Quantity::Ber, Method::Quadrature) => true,
    }
}

struct Job<'a> {
    curve_index: usize,
    curve: &'a CurveSpec,
    method: Method,
    gamma_avg_db: f64,
}

/// Evaluates every supported (curve, method, sweep point) of a resolved
/// config. Points run in parallel; the result does not depend on the order.
pub fn run_sweep(cfg: &RunConfig) -> Result<RunRecord, HarnessError> {
    cfg.validate()?;
    let quantity = cfg.quantity();
    let points = cfg.sweep().points();
    let mut skipped = Vec::new();
    let mut jobs = Vec::new();
    let mut bases = Vec::new();
    for (curve_index, curve) in cfg.curves.iter().enumerate() {
        bases.push(curve.system(points[0]).map_err(|e| HarnessError::config(&format!("curves[{curve_index}]"), &e.to_string()))?);
        for &method in &cfg.methods {
            if !supports(quantity, &curve.turbulence, method) {
                skipped.push(format!("{}/{}", curve.id, method));
                continue;
            }
            jobs.extend(points.iter().map(|&gamma_avg_db| Job { curve_index, curve, method, gamma_avg_db }));
        }
    }
    jobs.sort_by(|a, b| {
        (a.method, a.curve_index).cmp(&(b.method, b.curve_index)).then(a.gamma_avg_db.total_cmp(&b.gamma_avg_db))
    });
    let mut rows: Vec<(usize, Row)> = jobs
        .par_iter()
        .map(|job| (job.curve_index, evaluate(cfg, quantity, &bases[job.curve_index], job)))
        .collect();
    rows.sort_by(|(ca, a), (cb, b)| {
        a.method.cmp(&b.method).then(a.gamma_avg_db.total_cmp(&b.gamma_avg_db)).then(ca.cmp(cb))
    });
    let seed = cfg.methods.contains(&Method::MonteCarlo).then(|| cfg.monte_carlo.map(|m| m.seed)).flatten();
    Ok(RunRecord {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        seed,
        skipped,
        rows: rows.into_iter().map(|(_, r)| r).collect(),
    })
}

enum Outcome {
    Analytic(EvalResult),
    MonteCarlo(McEstimate),
}

fn evaluate(cfg: &RunConfig, quantity: Quantity, base: &SystemConfig, job: &Job) -> Row {
    let mut row = Row {
        curve: job.curve.id.clone(),
        method: job.method,
        gamma_avg_db: job.gamma_avg_db,
        n_antennas: job.curve.n_antennas,
        n_relays: job.curve.n_relays,
        gamma_th_db: if quantity == Quantity::Outage { job.curve.gamma_th_db } else { None },
        value: None,
        ci_halfwidth: None,
        terms_used: None,
        err_estimate: None,
        seed: None,
        error: None,
        fatal: false,
    };
    let outcome = base
        .with_mean_snr(crate::db_to_linear(job.gamma_avg_db))
        .and_then(|system| dispatch(cfg, quantity, &system, job.method));
    match outcome {
        Ok(Outcome::Analytic(r)) => {
            let Diagnostics { terms_used, error_estimate, .. } = r.diagnostics;
            row.value = Some(r.value);
            row.terms_used = terms_used;
            row.err_estimate = error_estimate;
        }
        Ok(Outcome::MonteCarlo(e)) => {
            row.value = Some(e.mean);
            row.ci_halfwidth = Some(e.half_width_95);
            row.seed = cfg.monte_carlo.map(|m| m.seed);
        }
        Err(e) => {
            row.err_estimate = match e {
                Error::Cancellation { bound, .. } => Some(bound),
                Error::SeriesDivergence { ratio, .. } => Some(ratio),
                Error::QuadratureNotConverged { error_estimate, .. } => Some(error_estimate),
                _ => None,
            };
            row.error = Some(e.to_string());
        }
    }
    if let Some(v) = row.value {
        let bound = if quantity == Quantity::Ber { 0.5 } else { 1.0 };
        if !(0.0..=bound).contains(&v) {
            row.fatal = true;
            row.error = Some(format!("evaluator returned {v:e}, outside [0, {bound}]"));
            row.value = None;
        }
    }
    row
}

fn dispatch(cfg: &RunConfig, quantity: Quantity, system: &SystemConfig, method: Method) -> crate::Result<Outcome> {
    let negexp = matches!(system.fso(), FsoModel::NegExp(_));
    let analytic = match (quantity, method) {
        (_, Method::MonteCarlo) => {
            let spec = cfg.monte_carlo.expect("validated config").spec();
            let estimate = match quantity {
                Quantity::Outage => simulate_outage(system, &spec)?,
                Quantity::Ber => simulate_ber(system, &spec)?,
            };
            return Ok(Outcome::MonteCarlo(estimate));
        }
        (Quantity::Outage, Method::Closed) if negexp => outage_negexp(system)?,
        (Quantity::Outage, Method::Closed) => outage_gg_pe(system)?,
        (Quantity::Outage, Method::Series) => outage_gg_pe_series(system, cfg.series_terms)?,
        (Quantity::Outage, Method::Asymptotic) => outage_asymptotic(system)?,
        (Quantity::Ber, Method::Closed) => ber_negexp_closed(system)?,
        (Quantity::Ber, Method::Series) => ber_gg_pe_series(system, cfg.series_terms)?,
        (Quantity::Ber, Method::Asymptotic) => ber_gg_pe_asymptotic(system)?,
        (Quantity::Ber, Method::Quadrature) => ber_dpsk_quadrature(system, &cfg.quadrature)?,
        (Quantity::Outage, Method::Quadrature) => {
            return Err(Error::Unsupported { method: "quadrature", what: "the outage probability".into() })
        }
    };
    Ok(Outcome::Analytic(analytic))
}
