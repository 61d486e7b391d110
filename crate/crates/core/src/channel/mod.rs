//! Per-branch SNR distributions: CDFs for the analytical layer and samplers
//! for the Monte-Carlo oracle.

mod gamma_gamma;
mod negexp;
mod rayleigh;

use rand::Rng;
use rand_distr::{Distribution, Open01};

pub use gamma_gamma::{
    AsymptoticBranch, BranchKind, GammaGammaPe, GammaGammaSampler, Perturbation, SeriesCoefficients,
    SeriesValue, CONVERGENCE_RADIUS, DEFAULT_TRUNCATION,
};
pub use negexp::NegExp;
pub use rayleigh::RayleighRf;

use crate::error::{domain, Result};

pub(crate) fn check_snr(gamma: f64) -> Result<()> {
    if gamma >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("SNR must be non-negative, got {gamma}")))
    }
}

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and positive, got {value}")))
    }
}

/// Uniform draw on the open interval (0, 1).
pub(crate) fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

/// Turbulence model of the FSO branch.
#[derive(Debug, Clone, PartialEq)]
pub enum FsoModel {
    GammaGammaPe(GammaGammaPe),
    NegExp(NegExp),
}

impl FsoModel {
    pub fn mean_snr(&self) -> f64 {
        match self {
            FsoModel::GammaGammaPe(ch) => ch.mean_snr(),
            FsoModel::NegExp(ch) => ch.mean_snr(),
        }
    }

    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        Ok(match self {
            FsoModel::GammaGammaPe(ch) => FsoModel::GammaGammaPe(ch.with_mean_snr(mean_snr)?),
            FsoModel::NegExp(ch) => FsoModel::NegExp(NegExp::new(ch.lambda(), mean_snr)?),
        })
    }

    /// Best available CDF: closed form for Negative-Exponential; series or
    /// contour quadrature (outside the series radius) for Gamma-Gamma.
    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        match self {
            FsoModel::GammaGammaPe(ch) => ch.cdf(gamma),
            FsoModel::NegExp(ch) => ch.cdf(gamma),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FsoModel::GammaGammaPe(_) => "Gamma-Gamma with pointing error",
            FsoModel::NegExp(_) => "Negative Exponential",
        }
    }
}

/// Reusable sampler for an [`FsoModel`].
#[derive(Debug, Clone)]
pub enum FsoSampler {
    GammaGammaPe(GammaGammaSampler),
    NegExp(NegExp),
}

impl FsoSampler {
    pub fn new(model: &FsoModel) -> Self {
        match model {
            FsoModel::GammaGammaPe(ch) => FsoSampler::GammaGammaPe(ch.sampler()),
            FsoModel::NegExp(ch) => FsoSampler::NegExp(ch.clone()),
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FsoSampler::GammaGammaPe(s) => s.sample(rng),
            FsoSampler::NegExp(ch) => ch.sample(rng),
        }
    }
}
