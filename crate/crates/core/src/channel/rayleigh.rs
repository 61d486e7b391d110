use rand::Rng;

use super::{check_positive, check_snr, open01};
use crate::error::Result;

/// Rayleigh-faded RF branch: exponentially distributed SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighRf {
    mean_snr: f64,
}

impl RayleighRf {
    pub fn new(mean_snr: f64) -> Result<Self> {
        check_positive("mean RF SNR", mean_snr)?;
        Ok(Self { mean_snr })
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    /// `1 − e^{−γ/γ̄}`
    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        check_snr(gamma)?;
        Ok(-(-gamma / self.mean_snr).exp_m1())
    }

    /// Inverse-CDF map of a uniform variate.
    #[inline]
    pub fn snr_from_uniform(&self, u: f64) -> f64 {
        -self.mean_snr * u.ln()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.snr_from_uniform(open01(rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cdf_examples() {
        let ch = RayleighRf::new(3.0).unwrap();
        assert_eq!(ch.cdf(0.0).unwrap(), 0.0);
        assert_relative_eq!(ch.cdf(3.0).unwrap(), 0.632_120_558_828_557_7, max_relative = 1e-15);
        assert_relative_eq!(ch.cdf(3.0 * 2f64.ln()).unwrap(), 0.5, max_relative = 1e-15);
        assert!(ch.cdf(-1.0).is_err());
    }

    #[test]
    fn inverse_map() {
        let ch = RayleighRf::new(2.5).unwrap();
        assert_relative_eq!(ch.snr_from_uniform((-1f64).exp()), 2.5, max_relative = 1e-15);
        assert_relative_eq!(ch.snr_from_uniform(0.5), 2.5 * 2f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_mean() {
        assert!(RayleighRf::new(0.0).is_err());
        assert!(RayleighRf::new(f64::NAN).is_err());
    }
}
