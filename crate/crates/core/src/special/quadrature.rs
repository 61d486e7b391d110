use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest Gauss–Laguerre rule tried before switching to tanh-sinh.
pub const LAGUERRE_NODE_CAP: usize = 512;

/// Upper limit of the tanh-sinh fallback; the neglected tail of a bounded
/// integrand is at most `sup|f| · e^{-200}`.
pub const TANH_SINH_UPPER_LIMIT: f64 = 200.0;

// The fallback integrates [0, 40] and [40, 200] separately so that the
// nodes of the first piece stay where e^{-γ} has its mass.
const TANH_SINH_SPLIT: f64 = 40.0;

const TANH_SINH_MAX_LEVEL: u32 = 12;
const TANH_SINH_T_MAX: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { node_count: 16, relative_tolerance: 1e-12, absolute_tolerance: 1e-16 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(domain("quadrature node_count must be at least 2"));
        }
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        Ok(())
    }

    fn accepts(&self, previous: f64, current: f64) -> bool {
        let diff = (current - previous).abs();
        diff.is_finite()
            && diff <= self.absolute_tolerance.max(self.relative_tolerance * current.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureScheme {
    GaussLaguerre { nodes: usize },
    TanhSinh { levels: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub scheme: QuadratureScheme,
}

/// Nodes and weights of an n-point Gauss–Laguerre rule (weight `e^{-x}`).
#[derive(Debug)]
pub struct LaguerreRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Cached n-point Gauss–Laguerre rule.
///
/// Nodes come from the eigenvalues of the Jacobi matrix (implicit QL), are
/// Newton-polished on the three-term recurrence, and the weights are formed
/// in log space so that the far nodes underflow gracefully instead of
/// overflowing the polynomial values.
pub fn gauss_laguerre_rule(n: usize) -> Arc<LaguerreRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LaguerreRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_laguerre_rule(n));
    cache.lock().unwrap().insert(n, Arc::clone(&rule));
    rule
}

fn build_laguerre_rule(n: usize) -> LaguerreRule {
    let mut diag: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64).collect();
    let mut off: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
    off[n - 1] = 0.0;
    tridiagonal_eigenvalues(&mut diag, &mut off);
    diag.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &guess in &diag {
        let mut x = guess.max(f64::MIN_POSITIVE);
        let mut eval = laguerre_pair(n, x);
        for _ in 0..12 {
            let (ln_n, ln_nm1) = eval;
            // L_n / L_n' with L_n' = n (L_n − L_{n−1}) / x; scale-free.
            let step = x * ln_n / (n as f64 * (ln_n - ln_nm1));
            if !step.is_finite() {
                break;
            }
            x -= step;
            eval = laguerre_pair(n, x);
            if step.abs() <= 4.0 * f64::EPSILON * x {
                break;
            }
        }
        // w = 1/(x L_n'(x)²) with x L_n' = n (L_n − L_{n−1}); keeping the L_n
        // residual makes the weight insensitive to the last bits of the node.
        let ln_abs_derivative = laguerre_ln_abs_difference(n, x);
        let ln_w = x.ln() - 2.0 * (n as f64).ln() - 2.0 * ln_abs_derivative;
        nodes.push(x);
        weights.push(ln_w.exp());
    }
    LaguerreRule { nodes, weights }
}

/// Scaled `(L_n(x), L_{n−1}(x))`; both share one positive scale factor.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let (p, q, _) = laguerre_scaled(n, x);
    (p, q)
}

/// `ln |L_n(x) − L_{n−1}(x)|`.
fn laguerre_ln_abs_difference(n: usize, x: f64) -> f64 {
    let (p, q, ln_scale) = laguerre_scaled(n, x);
    (p - q).abs().ln() + ln_scale
}

fn laguerre_scaled(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    let mut ln_scale = 0.0;
    if n == 1 {
        return (cur, prev, ln_scale);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            ln_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (cur, prev, ln_scale)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL.
/// `off[i]` couples rows i and i+1; the last entry is ignored.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            assert!(iterations < 200, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

fn gauss_laguerre<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    let rule = gauss_laguerre_rule(n);
    let mut acc = super::CompensatedSum::new();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w != 0.0 {
            acc.add(w * f(x));
        }
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanhSinhOutcome {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub levels: u32,
    pub converged: bool,
}

/// Tanh-sinh (double-exponential) quadrature of `f` over `[a, b]`.
///
/// Abscissae are generated from their distance to the nearer endpoint so
/// integrable endpoint singularities are sampled without cancellation. The
/// step is halved until two successive levels agree within
/// `max(abs_tol, rel_tol·|I|)`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> TanhSinhOutcome {
    let width = b - a;
    let mut evaluations = 0usize;
    let mut node = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let q = (-2.0 * u.abs()).exp();
        // distance from the nearer endpoint, and dx/dt
        let dist = width * q / (1.0 + q);
        let weight = width * std::f64::consts::PI * t.cosh() * q / ((1.0 + q) * (1.0 + q));
        if dist == 0.0 || weight == 0.0 {
            return 0.0;
        }
        let x = if t < 0.0 { a + dist } else { b - dist };
        if x <= a || x >= b {
            return 0.0;
        }
        evaluations += 1;
        let y = f(x);
        weight * y
    };

    let mut h = 1.0;
    let mut sum = node(0.0);
    let mut k = 1;
    while k as f64 * h <= TANH_SINH_T_MAX {
        let t = k as f64 * h;
        sum += node(t) + node(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut level = 0;
    while level < TANH_SINH_MAX_LEVEL {
        level += 1;
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= TANH_SINH_T_MAX {
            let t = k as f64 * h;
            sum += node(t) + node(-t);
            k += 2;
        }
        let refined = sum * h;
        error = (refined - estimate).abs();
        estimate = refined;
        if level >= 3 && error <= abs_tol.max(rel_tol * estimate.abs()) {
            return TanhSinhOutcome { value: estimate, error_estimate: error, evaluations, levels: level, converged: true };
        }
    }
    TanhSinhOutcome { value: estimate, error_estimate: error, evaluations, levels: level, converged: false }
}

/// Approximates `∫₀^∞ e^{-γ} f(γ) dγ`.
///
/// Gauss–Laguerre rules are doubled from `spec.node_count` up to
/// [`LAGUERRE_NODE_CAP`]; convergence means two consecutive rules agree
/// within tolerance. Integrands with non-analytic behaviour at the origin
/// (fractional powers of γ) never pass that test and fall through to
/// tanh-sinh on `[0, 200]` plus the tail bound `e^{-200}·max(1, |f(200)|)`.
pub fn laplace_quadrature<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<QuadratureOutcome> {
    spec.validate()?;
    let mut n = spec.node_count.min(LAGUERRE_NODE_CAP);
    let mut evaluations = n;
    let mut previous = gauss_laguerre(&f, n);
    while n * 2 <= LAGUERRE_NODE_CAP {
        n *= 2;
        evaluations += n;
        let current = gauss_laguerre(&f, n);
        if spec.accepts(previous, current) {
            return Ok(QuadratureOutcome {
                value: current,
                error_estimate: (current - previous).abs(),
                evaluations,
                scheme: QuadratureScheme::GaussLaguerre { nodes: n },
            });
        }
        previous = current;
    }

    let integrand = |x: f64| (-x).exp() * f(x);
    let (rel, abs) = (spec.relative_tolerance, spec.absolute_tolerance);
    let head = tanh_sinh(integrand, 0.0, TANH_SINH_SPLIT, rel, abs);
    // the second piece only has to be accurate relative to the first
    let rest = tanh_sinh(integrand, TANH_SINH_SPLIT, TANH_SINH_UPPER_LIMIT, rel, abs.max(rel * head.value.abs()));
    let value = head.value + rest.value;
    let tail = (-TANH_SINH_UPPER_LIMIT).exp() * f(TANH_SINH_UPPER_LIMIT).abs().max(1.0);
    let error_estimate = head.error_estimate + rest.error_estimate + tail;
    evaluations += head.evaluations + rest.evaluations + 1;
    let tolerance = abs.max(rel * value.abs());
    if head.converged && rest.converged && value.is_finite() && error_estimate <= tolerance.max(tail) {
        Ok(QuadratureOutcome {
            value,
            error_estimate,
            evaluations,
            scheme: QuadratureScheme::TanhSinh { levels: head.levels.max(rest.levels) },
        })
    } else {
        Err(Error::QuadratureNotConverged { best: value, error_estimate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn laplace_examples() {
        let one = laplace_quadrature(|_| 1.0, &spec()).unwrap();
        assert_relative_eq!(one.value, 1.0, max_relative = 1e-14);
        let lin = laplace_quadrature(|g| g, &spec()).unwrap();
        assert_relative_eq!(lin.value, 1.0, max_relative = 1e-14);
        let cdf = laplace_quadrature(|g| 1.0 - (-g).exp(), &spec()).unwrap();
        assert_relative_eq!(cdf.value, 0.5, max_relative = 1e-13);
        assert!(matches!(one.scheme, QuadratureScheme::GaussLaguerre { .. }));
    }

    #[test]
    fn fractional_power_falls_back_to_tanh_sinh() {
        // ∫ e^{-γ} √γ dγ = Γ(3/2) = √π/2
        let out = laplace_quadrature(|g| g.sqrt(), &spec()).unwrap();
        assert!(matches!(out.scheme, QuadratureScheme::TanhSinh { .. }));
        assert_relative_eq!(out.value, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn laguerre_rules_are_exact_for_polynomials() {
        for n in [2usize, 16, 64, 512] {
            let rule = gauss_laguerre_rule(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-13, "n = {n}: weight sum {total}");
            // ∫ e^{-x} x^3 dx = 6
            let m3: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(3)).sum();
            if n >= 2 {
                assert_relative_eq!(m3, 6.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // ∫_0^1 x^{-0.3} dx = 1/0.7
        let out = tanh_sinh(|x| x.powf(-0.3), 0.0, 1.0, 1e-14, 1e-300);
        assert!(out.converged);
        assert_relative_eq!(out.value, 1.0 / 0.7, max_relative = 1e-12);
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let bad = QuadratureSpec { node_count: 1, ..QuadratureSpec::default() };
        assert!(laplace_quadrature(|_| 1.0, &bad).is_err());
        let bad = QuadratureSpec { relative_tolerance: 0.0, ..QuadratureSpec::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn wildly_oscillating_integrand_reports_non_convergence() {
        let tight = QuadratureSpec { relative_tolerance: 1e-15, absolute_tolerance: 1e-18, ..spec() };
        let err = laplace_quadrature(|g| (1e4 * g).sin().signum(), &tight).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }
}
