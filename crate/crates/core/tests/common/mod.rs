#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Upper bound on the Kolmogorov-Smirnov distance between the empirical CDF
/// of `samples` and `cdf`, evaluating `cdf` only at every `stride`-th order
/// statistic.
///
/// Between two evaluated order statistics `s_a ≤ x < s_b` both CDFs are
/// non-decreasing, so `|F_n(x) − F(x)|` is at most
/// `max(F(s_b) − a/n, (b−1)/n − F(s_a))` (ranks counted from 1).
pub fn ks_upper_bound(mut samples: Vec<f64>, stride: usize, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    let mut ranks: Vec<usize> = (1..=n).step_by(stride.max(1)).collect();
    if *ranks.last().unwrap() != n {
        ranks.push(n);
    }
    let values: Vec<f64> = ranks.iter().map(|&r| cdf(samples[r - 1])).collect();
    let nf = n as f64;
    // below the smallest and above the largest sample
    let mut bound = values[0].max(1.0 - values[values.len() - 1]);
    for j in 0..ranks.len() - 1 {
        let (a, b) = (ranks[j] as f64, ranks[j + 1] as f64);
        bound = bound.max(values[j + 1] - a / nf).max((b - 1.0) / nf - values[j]);
        // at the evaluated points themselves
        bound = bound.max(a / nf - values[j]).max(values[j] - (a - 1.0) / nf);
    }
    bound
}
