//! Hop-level and end-to-end SNR distributions of the relay chain.
//!
//! The first hop is an N-antenna selection-combining RF link; each of the M
//! relay hops selects the better of an FSO and an RF branch; the chain is in
//! outage when any hop falls below the threshold.

use serde::{Deserialize, Serialize};

use crate::channel::{FsoModel, GammaGammaPe, NegExp, RayleighRf};
use crate::error::{domain, Result};

/// Number of antennas, relays and the outage threshold (linear SNR).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Topology {
    pub n_antennas: u32,
    pub n_relays: u32,
    pub threshold_snr: f64,
}

impl Topology {
    pub fn new(n_antennas: u32, n_relays: u32, threshold_snr: f64) -> Result<Self> {
        let t = Self { n_antennas, n_relays, threshold_snr };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_antennas == 0 {
            return Err(domain("at least one receive antenna is required"));
        }
        if !(self.threshold_snr >= 0.0) || !self.threshold_snr.is_finite() {
            return Err(domain(format!("threshold SNR must be finite and ≥ 0, got {}", self.threshold_snr)));
        }
        Ok(())
    }
}

/// Average SNRs of the two branch types (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub mean_snr_fso: f64,
    pub mean_snr_rf: f64,
    /// Electro-optic conversion efficiency; already contained in
    /// `mean_snr_fso`, kept for reporting.
    pub eta: f64,
}

impl LinkBudget {
    pub fn new(mean_snr_fso: f64, mean_snr_rf: f64) -> Result<Self> {
        let b = Self { mean_snr_fso, mean_snr_rf, eta: 1.0 };
        b.validate()?;
        Ok(b)
    }

    /// Both branches at the same average SNR, η = 1.
    pub fn equal(mean_snr: f64) -> Result<Self> {
        Self::new(mean_snr, mean_snr)
    }

    /// `γ̄_FSO = E[x²]η²/σ²_FSO`, `γ̄_RF = E[x²]/σ²_RF`.
    pub fn from_powers(signal_power: f64, eta: f64, noise_fso: f64, noise_rf: f64) -> Result<Self> {
        for (name, v) in [("signal power", signal_power), ("eta", eta), ("FSO noise", noise_fso), ("RF noise", noise_rf)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        let b = Self { mean_snr_fso: signal_power * eta * eta / noise_fso, mean_snr_rf: signal_power / noise_rf, eta };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mean FSO SNR", self.mean_snr_fso), ("mean RF SNR", self.mean_snr_rf), ("eta", self.eta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Fading regime of the FSO branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum TurbulenceParams {
    /// Gamma-Gamma turbulence with zero-boresight pointing error; `kappa`
    /// defaults to `ξ²/(ξ²+1)`.
    GammaGammaPe {
        alpha: f64,
        beta: f64,
        xi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
    },
    /// Negative-Exponential (saturated) turbulence.
    #[serde(rename = "negexp")]
    NegExp { lambda: f64 },
}

impl TurbulenceParams {
    pub fn build(&self, mean_snr_fso: f64) -> Result<FsoModel> {
        Ok(match *self {
            TurbulenceParams::GammaGammaPe { alpha, beta, xi, kappa: None } => {
                FsoModel::GammaGammaPe(GammaGammaPe::new(alpha, beta, xi, mean_snr_fso)?)
            }
            TurbulenceParams::GammaGammaPe { alpha, beta, xi, kappa: Some(k) } => {
                FsoModel::GammaGammaPe(GammaGammaPe::with_kappa(alpha, beta, xi, k, mean_snr_fso)?)
            }
            TurbulenceParams::NegExp { lambda } => FsoModel::NegExp(NegExp::new(lambda, mean_snr_fso)?),
        })
    }
}

/// A fully specified link: topology, budget and channel laws built from
/// them, so the channel mean SNRs always match the budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    topology: Topology,
    budget: LinkBudget,
    turbulence: TurbulenceParams,
    fso: FsoModel,
    rf: RayleighRf,
}

impl SystemConfig {
    pub fn new(topology: Topology, budget: LinkBudget, turbulence: TurbulenceParams) -> Result<Self> {
        topology.validate()?;
        budget.validate()?;
        let fso = turbulence.build(budget.mean_snr_fso)?;
        let rf = RayleighRf::new(budget.mean_snr_rf)?;
        Ok(Self { topology, budget, turbulence, fso, rf })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn budget(&self) -> &LinkBudget {
        &self.budget
    }

    pub fn turbulence(&self) -> &TurbulenceParams {
        &self.turbulence
    }

    pub fn fso(&self) -> &FsoModel {
        &self.fso
    }

    pub fn rf(&self) -> &RayleighRf {
        &self.rf
    }

    /// Same system with a new budget; Gamma-Gamma coefficients are reused.
    pub fn with_budget(&self, budget: LinkBudget) -> Result<Self> {
        budget.validate()?;
        Ok(Self {
            topology: self.topology,
            budget,
            turbulence: self.turbulence,
            fso: self.fso.with_mean_snr(budget.mean_snr_fso)?,
            rf: RayleighRf::new(budget.mean_snr_rf)?,
        })
    }

    /// Both branches at `mean_snr` (the figures' γ_avg convention).
    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        self.with_budget(LinkBudget { mean_snr_fso: mean_snr, mean_snr_rf: mean_snr, eta: self.budget.eta })
    }

    pub fn with_topology(&self, topology: Topology) -> Result<Self> {
        topology.validate()?;
        Ok(Self { topology, ..self.clone() })
    }

    pub fn with_threshold(&self, threshold_snr: f64) -> Result<Self> {
        self.with_topology(Topology { threshold_snr, ..self.topology })
    }

    /// CDF of the selection-combined first hop, `F_RF(γ)^N`.
    pub fn first_hop_cdf(&self, gamma: f64) -> Result<f64> {
        Ok(self.rf.cdf(gamma)?.powi(self.topology.n_antennas as i32))
    }

    /// CDF of a relay hop, `F_FSO(γ)·F_RF(γ)`.
    pub fn relay_hop_cdf(&self, gamma: f64) -> Result<f64> {
        Ok(self.fso.cdf(gamma)? * self.rf.cdf(gamma)?)
    }

    /// `1 − (1 − F₁(γ))(1 − F_j(γ))^M` at an arbitrary threshold `γ`.
    ///
    /// Formed as `−expm1(log1p(−F₁) + M·log1p(−F_j))` so that small outage
    /// probabilities keep their relative precision.
    pub fn outage_at(&self, gamma: f64) -> Result<f64> {
        let first = self.first_hop_cdf(gamma)?;
        let ln_survival = if self.topology.n_relays == 0 {
            (-first).ln_1p()
        } else {
            let relay = self.relay_hop_cdf(gamma)?;
            (-first).ln_1p() + self.topology.n_relays as f64 * (-relay).ln_1p()
        };
        Ok((-ln_survival.exp_m1()).clamp(0.0, 1.0))
    }

    /// End-to-end outage probability at the configured threshold.
    pub fn end_to_end_outage(&self) -> Result<f64> {
        self.outage_at(self.topology.threshold_snr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const E1: f64 = 0.632_120_558_828_557_7;

    fn negexp(n: u32, m: u32, th: f64, mean: f64) -> SystemConfig {
        SystemConfig::new(
            Topology::new(n, m, th).unwrap(),
            LinkBudget::equal(mean).unwrap(),
            TurbulenceParams::NegExp { lambda: 1.0 },
        )
        .unwrap()
    }

    #[test]
    fn first_hop_examples() {
        let c1 = negexp(1, 0, 1.0, 3.0);
        assert_eq!(c1.first_hop_cdf(2.0).unwrap(), c1.rf().cdf(2.0).unwrap());
        let c2 = negexp(2, 0, 1.0, 3.0);
        assert_relative_eq!(c2.first_hop_cdf(3.0 * 2f64.ln()).unwrap(), 0.25, max_relative = 1e-14);
        let c4 = negexp(4, 0, 1.0, 3.0);
        assert_relative_eq!(c4.first_hop_cdf(3.0).unwrap(), E1.powi(4), max_relative = 1e-14);
        assert_relative_eq!(E1.powi(4), 0.159_66, epsilon = 1e-4);
    }

    #[test]
    fn relay_hop_examples() {
        let c = negexp(2, 1, 1.0, 5.0);
        assert_eq!(c.relay_hop_cdf(0.0).unwrap(), 0.0);
        assert_relative_eq!(c.relay_hop_cdf(5.0).unwrap(), E1 * E1, max_relative = 1e-14);
        assert_relative_eq!(c.relay_hop_cdf(5e5).unwrap(), c.rf().cdf(5e5).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn end_to_end_examples() {
        assert_eq!(negexp(2, 2, 0.0, 10.0).end_to_end_outage().unwrap(), 0.0);
        let c = negexp(3, 0, 2.0, 10.0);
        assert_relative_eq!(c.end_to_end_outage().unwrap(), c.first_hop_cdf(2.0).unwrap(), max_relative = 1e-14);
        // N=2, M=1, γ_th = γ̄: 1 − (1 − E1²)²
        let c = negexp(2, 1, 1.0, 1.0);
        let q = E1 * E1;
        assert_relative_eq!(c.end_to_end_outage().unwrap(), 1.0 - (1.0 - q) * (1.0 - q), max_relative = 1e-14);
        assert_relative_eq!(c.end_to_end_outage().unwrap(), 0.6395, epsilon = 1e-4);
    }

    #[test]
    fn small_outage_keeps_relative_precision() {
        let c = negexp(2, 2, 1.0, 1e6);
        let p = c.end_to_end_outage().unwrap();
        let direct = c.first_hop_cdf(1.0).unwrap() + 2.0 * c.relay_hop_cdf(1.0).unwrap();
        assert_relative_eq!(p, direct, max_relative = 1e-5);
        assert!(p > 0.0 && p < 1e-8);
    }

    #[test]
    fn budget_propagates_into_channels() {
        let c = negexp(2, 2, 1.0, 10.0).with_budget(LinkBudget::new(20.0, 30.0).unwrap()).unwrap();
        assert_eq!(c.fso().mean_snr(), 20.0);
        assert_eq!(c.rf().mean_snr(), 30.0);
        let b = LinkBudget::from_powers(2.0, 0.5, 0.1, 0.4).unwrap();
        assert_relative_eq!(b.mean_snr_fso, 5.0);
        assert_relative_eq!(b.mean_snr_rf, 5.0);
    }

    #[test]
    fn rejects_invalid_topology() {
        assert!(Topology::new(0, 1, 1.0).is_err());
        assert!(Topology::new(1, 1, -1.0).is_err());
        assert!(LinkBudget::new(0.0, 1.0).is_err());
    }

    #[test]
    fn turbulence_params_round_trip_through_json() {
        let gg = TurbulenceParams::GammaGammaPe { alpha: 4.0, beta: 1.9, xi: 10.45, kappa: None };
        let text = serde_json::to_string(&gg).unwrap();
        assert_eq!(text, r#"{"model":"gamma_gamma_pe","alpha":4.0,"beta":1.9,"xi":10.45}"#);
        assert_eq!(serde_json::from_str::<TurbulenceParams>(&text).unwrap(), gg);
        let ne: TurbulenceParams = serde_json::from_str(r#"{"model":"negexp","lambda":2}"#).unwrap();
        assert_eq!(ne, TurbulenceParams::NegExp { lambda: 2.0 });
        assert!(serde_json::from_str::<TurbulenceParams>(r#"{"model":"negexp","lambda":2,"x":1}"#).is_err());
    }
}
