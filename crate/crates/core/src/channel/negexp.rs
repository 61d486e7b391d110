use rand::Rng;

use super::{check_positive, check_snr, open01};
use crate::error::Result;

/// Negative-Exponential (saturated) turbulence on the FSO branch:
/// `F(γ) = 1 − e^{−λ√(γ/γ̄)}`.
///
/// `lambda` is only ever used as that exponent parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegExp {
    lambda: f64,
    mean_snr: f64,
}

impl NegExp {
    pub fn new(lambda: f64, mean_snr: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_positive("mean FSO SNR", mean_snr)?;
        Ok(Self { lambda, mean_snr })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        check_snr(gamma)?;
        Ok(-(-self.lambda * (gamma / self.mean_snr).sqrt()).exp_m1())
    }

    #[inline]
    pub fn snr_from_uniform(&self, u: f64) -> f64 {
        let root = u.ln() / -self.lambda;
        self.mean_snr * root * root
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
        let one = NegExp::new(1.0, 7.0).unwrap();
        assert_eq!(one.cdf(0.0).unwrap(), 0.0);
        assert_relative_eq!(one.cdf(7.0).unwrap(), 0.632_120_558_828_557_7, max_relative = 1e-15);
        let two = NegExp::new(2.0, 7.0).unwrap();
        assert_relative_eq!(two.cdf(7.0 / 4.0).unwrap(), 0.632_120_558_828_557_7, max_relative = 1e-15);
        assert!(one.cdf(-0.1).is_err());
    }

    #[test]
    fn inverse_map() {
        let ch = NegExp::new(1.7, 3.0).unwrap();
        assert_relative_eq!(ch.snr_from_uniform((-1.7f64).exp()), 3.0, max_relative = 1e-14);
        assert!(ch.snr_from_uniform(1.0 - 1e-12) < 1e-20);
    }
}
