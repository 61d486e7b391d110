mod common;

use linklab::channel::{FsoModel, FsoSampler, GammaGammaPe, NegExp, RayleighRf};

const DRAWS: usize = 1_000_000;
const KS_LIMIT: f64 = 0.003;

#[test]
fn rayleigh_draws_follow_the_exponential_law() {
    let rf = RayleighRf::new(3.0).unwrap();
    let mut rng = common::rng(1);
    let xs = (0..DRAWS).map(|_| rf.sample(&mut rng)).collect();
    let d = common::ks_upper_bound(xs, 1, |g| rf.cdf(g).unwrap());
    assert!(d < KS_LIMIT, "{d}");
}

#[test]
fn negexp_draws_follow_their_cdf() {
    for lambda in [0.5, 1.0, 5.0] {
        let ch = NegExp::new(lambda, 20.0).unwrap();
        let mut rng = common::rng(2);
        let xs = (0..DRAWS).map(|_| ch.sample(&mut rng)).collect();
        let d = common::ks_upper_bound(xs, 1, |g| ch.cdf(g).unwrap());
        assert!(d < KS_LIMIT, "λ={lambda}: {d}");
    }
}

#[test]
fn gamma_gamma_draws_follow_their_cdf() {
    for (alpha, beta, xi) in [(4.0, 1.9, 10.45), (4.2, 1.4, 2.45), (2.5, 2.0, 1.2)] {
        let ch = GammaGammaPe::new(alpha, beta, xi, 5.0).unwrap();
        let sampler = FsoSampler::new(&FsoModel::GammaGammaPe(ch.clone()));
        let mut rng = common::rng(3);
        let xs = (0..DRAWS).map(|_| sampler.sample(&mut rng)).collect();
        let d = common::ks_upper_bound(xs, 200, |g| ch.cdf(g).unwrap());
        assert!(d < KS_LIMIT, "α={alpha}, β={beta}, ξ={xi}: {d}");
    }
}

#[test]
fn bound_is_exact_with_unit_stride() {
    // F_n against itself shifted: uniform samples on a lattice
    let n = 1000;
    let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    let d = common::ks_upper_bound(xs.clone(), 1, |x| x.clamp(0.0, 1.0));
    assert!((d - 0.5 / n as f64).abs() < 1e-12, "{d}");
    let coarse = common::ks_upper_bound(xs, 50, |x| x.clamp(0.0, 1.0));
    assert!(coarse >= d && coarse < 0.06);
}
