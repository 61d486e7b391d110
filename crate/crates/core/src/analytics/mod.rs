//! Analytical evaluators of end-to-end outage probability and DPSK BER.
//!
//! Every expression here is a rearrangement of
//! `P_out(γ) = 1 − (1 − F₁(γ))(1 − F_j(γ))^M` (and of
//! `P_e = ½∫₀^∞ e^{−γ} P_out(γ) dγ` for the BER), expanded with the binomial
//! theorem over the antenna index `k`, relay-power index `t` and RF index
//! `u`. The alternating sums are accumulated in double-double arithmetic and
//! report their cancellation ratio.

mod ber;
mod expansion;
mod outage;

use serde::{Deserialize, Serialize};

use crate::channel::BranchKind;
use crate::special::binomial;

pub use ber::{ber_dpsk_quadrature, ber_gg_pe_asymptotic, ber_gg_pe_series, ber_negexp_closed, laplace_exp_sqrt};
pub use outage::{outage_asymptotic, outage_gg_pe, outage_gg_pe_series, outage_negexp};

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    Series,
    Asymptotic,
    Quadrature,
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Closed, Method::Series, Method::Asymptotic, Method::Quadrature, Method::MonteCarlo];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Asymptotic => "asymptotic",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "mc",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == text)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Method-specific diagnostics; fields that do not apply are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Series terms kept per coefficient ladder.
    pub terms_used: Option<usize>,
    /// Truncation plus rounding bound (series) or achieved quadrature error.
    pub error_estimate: Option<f64>,
    /// Monte-Carlo 95 % half-width.
    pub ci_halfwidth: Option<f64>,
    /// Largest alternating-sum term over the result.
    pub cancellation: Option<f64>,
    /// Integrand evaluations (quadrature).
    pub evaluations: Option<usize>,
    /// Active small-γ branch (asymptotic).
    pub branch: Option<BranchKind>,
}

/// A probability with the method that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl EvalResult {
    pub(crate) fn new(value: f64, method: Method, diagnostics: Diagnostics) -> Self {
        Self { value, method, diagnostics }
    }
}

/// Visits every `(k, t, u)` of the triple binomial expansion with weight
/// `Ω = C(N,k) C(M,t) C(t,u) (−1)^{k+t+u}`, `k = 1..N`, `t = 0..M`, `u = 0..t`.
pub(crate) fn for_each_omega(n: u32, m: u32, mut visit: impl FnMut(u32, u32, u32, f64)) {
    for k in 1..=n {
        for t in 0..=m {
            for u in 0..=t {
                let sign = if (k + t + u) % 2 == 0 { 1.0 } else { -1.0 };
                visit(k, t, u, sign * binomial(n, k) * binomial(m, t) * binomial(t, u));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_weights_sum_to_minus_one() {
        // at γ = 0 every exponential is 1 and only t = 0 survives (0⁰ = 1)
        for n in 1..=4 {
            for m in 0..=4 {
                let mut s = 0.0;
                for_each_omega(n, m, |_, t, _, w| s += if t == 0 { w } else { 0.0 });
                assert_eq!(s, -1.0);
            }
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.as_str()), Some(m));
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.as_str()));
        }
        assert_eq!(Method::parse("exact"), None);
    }
}
