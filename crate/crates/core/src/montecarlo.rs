//! Monte-Carlo estimates of the outage probability and the DPSK bit-error
//! rate, drawn from the per-branch fading laws independently of every
//! analytical expansion.
//!
//! Trials are cut into fixed-size batches; batch `b` draws from a ChaCha8
//! stream seeded with `seed` and stream number `b`. Batch tallies are reduced
//! in batch order, so an estimate depends on `(cfg, spec)` only and not on
//! how many worker threads ran the batches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{FsoModel, FsoSampler, RayleighRf};
use crate::error::{domain, Result};
use crate::special::CompensatedSum;
use crate::system::SystemConfig;

/// Per-trial error model for the bit-error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BerMode {
    /// The chain behaves as one link at its weakest hop SNR; each trial
    /// contributes the conditional error probability `½e^{−γ_min}`.
    EquivalentSnr,
    /// Every hop demodulates independently with error probability
    /// `½e^{−γ_hop}`; the delivered bit is wrong when an odd number of hops
    /// erred.
    CascadeXor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub trials: u64,
    pub seed: u64,
    pub ber_mode: BerMode,
    /// Trials per rng stream.
    pub batch: u64,
}

impl McSpec {
    pub const DEFAULT_BATCH: u64 = 1 << 16;

    pub fn new(trials: u64, seed: u64) -> Self {
        Self { trials, seed, ber_mode: BerMode::EquivalentSnr, batch: Self::DEFAULT_BATCH }
    }

    pub fn with_ber_mode(self, ber_mode: BerMode) -> Self {
        Self { ber_mode, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(domain("Monte-Carlo trials must be positive"));
        }
        if self.batch == 0 {
            return Err(domain("Monte-Carlo batch size must be positive"));
        }
        Ok(())
    }

    fn batches(&self) -> impl IndexedParallelIterator<Item = (u64, u64)> + '_ {
        let count = self.trials.div_ceil(self.batch) as usize;
        (0..count).into_par_iter().map(move |b| {
            let b = b as u64;
            let start = b * self.batch;
            (b, (self.trials - start).min(self.batch))
        })
    }

    fn rng(&self, batch: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch);
        rng
    }
}

/// What an estimate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Outage,
    Ber(BerMode),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// `1.96·√(mean(1 − mean)/trials)`.
    pub half_width_95: f64,
    pub trials: u64,
    pub quantity: Quantity,
    /// Unbiased variance of a single trial's contribution.
    pub sample_variance: f64,
}

impl McEstimate {
    fn from_sums(sum: f64, sum_sq: f64, trials: u64, quantity: Quantity) -> Self {
        let n = trials as f64;
        let mean = (sum / n).clamp(0.0, 1.0);
        let sample_variance = if trials > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Self { mean, half_width_95: ci_halfwidth(mean, trials), trials, quantity, sample_variance }
    }
}

/// 95 % normal-approximation half-width `1.96·√(p(1−p)/n)` of a binomial
/// proportion; zero when `p` is 0 or 1.
pub fn ci_halfwidth(mean: f64, trials: u64) -> f64 {
    if trials == 0 || mean <= 0.0 || mean >= 1.0 {
        return 0.0;
    }
    1.96 * (mean * (1.0 - mean) / trials as f64).sqrt()
}

/// Probability `p` that a branch SNR clears `γ_th`. With the inverse-CDF
/// draw `γ = F⁻¹(1−U)`, the event `γ ≥ γ_th` is the event `U < p`.
struct Survival(f64);

impl Survival {
    #[inline]
    fn passes<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        rng.random::<f64>() < self.0
    }
}

/// How a relay hop's FSO branch is tested against the threshold.
enum FsoTest {
    /// Closed-form survival probability: a single uniform comparison.
    Survival(Survival),
    /// Full SNR draw.
    Draw(FsoSampler, f64),
}

impl FsoTest {
    #[inline]
    fn passes<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        match self {
            FsoTest::Survival(s) => s.passes(rng),
            FsoTest::Draw(sampler, threshold) => sampler.sample(rng) >= *threshold,
        }
    }
}

/// Fraction of trials in which some hop's selected SNR falls below `γ_th`.
///
/// A trial draws, hop by hop, the N first-hop Rayleigh SNRs and then the
/// RF and FSO SNR of each relay hop, and stops as soon as one hop is in
/// outage or all hops cleared. Exponential-type branches are drawn as the
/// uniform variate of their inverse CDF and compared against the matching
/// survival probability.
pub fn simulate_outage(cfg: &SystemConfig, spec: &McSpec) -> Result<McEstimate> {
    spec.validate()?;
    let topo = cfg.topology();
    let th = topo.threshold_snr;
    let quantity = Quantity::Outage;
    if th == 0.0 {
        return Ok(McEstimate::from_sums(0.0, 0.0, spec.trials, quantity));
    }
    let rf = Survival((-th / cfg.rf().mean_snr()).exp());
    let fso = match cfg.fso() {
        FsoModel::NegExp(ch) => FsoTest::Survival(Survival(1.0 - ch.cdf(th)?)),
        model => FsoTest::Draw(FsoSampler::new(model), th),
    };
    let (n, m) = (topo.n_antennas, topo.n_relays);
    let tallies: Vec<u64> = spec
        .batches()
        .map(|(b, trials)| {
            let mut rng = spec.rng(b);
            let mut outages = 0u64;
            for _ in 0..trials {
                let first = (0..n).any(|_| rf.passes(&mut rng));
                let cleared = first && (0..m).all(|_| rf.passes(&mut rng) || fso.passes(&mut rng));
                outages += u64::from(!cleared);
            }
            outages
        })
        .collect();
    let outages: u64 = tallies.iter().sum();
    Ok(McEstimate::from_sums(outages as f64, outages as f64, spec.trials, quantity))
}

/// Per-hop SNRs of one trial: the selection-combined first hop followed by
/// the `max(FSO, RF)` relay hops.
struct HopSampler {
    rf: RayleighRf,
    fso: FsoSampler,
    n: u32,
    m: u32,
}

impl HopSampler {
    fn first<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        (0..self.n).map(|_| self.rf.sample(rng)).fold(0.0, f64::max)
    }

    fn relay<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.fso.sample(rng).max(self.rf.sample(rng))
    }
}

/// DPSK bit-error rate under the chosen [`BerMode`].
pub fn simulate_ber(cfg: &SystemConfig, spec: &McSpec) -> Result<McEstimate> {
    spec.validate()?;
    let topo = cfg.topology();
    let hops = HopSampler { rf: *cfg.rf(), fso: FsoSampler::new(cfg.fso()), n: topo.n_antennas, m: topo.n_relays };
    let mode = spec.ber_mode;
    let tallies: Vec<(f64, f64)> = spec
        .batches()
        .map(|(b, trials)| {
            let mut rng = spec.rng(b);
            let (mut sum, mut sum_sq) = (CompensatedSum::new(), CompensatedSum::new());
            for _ in 0..trials {
                let x = match mode {
                    BerMode::EquivalentSnr => {
                        let mut weakest = hops.first(&mut rng);
                        for _ in 0..hops.m {
                            weakest = weakest.min(hops.relay(&mut rng));
                        }
                        0.5 * (-weakest).exp()
                    }
                    BerMode::CascadeXor => {
                        let mut wrong = rng.random::<f64>() < 0.5 * (-hops.first(&mut rng)).exp();
                        for _ in 0..hops.m {
                            let hop_error = 0.5 * (-hops.relay(&mut rng)).exp();
                            wrong ^= rng.random::<f64>() < hop_error;
                        }
                        f64::from(u8::from(wrong))
                    }
                };
                sum.add(x);
                sum_sq.add(x * x);
            }
            (sum.value(), sum_sq.value())
        })
        .collect();
    let (mut sum, mut sum_sq) = (CompensatedSum::new(), CompensatedSum::new());
    for (s, q) in tallies {
        sum.add(s);
        sum_sq.add(q);
    }
    Ok(McEstimate::from_sums(sum.value(), sum_sq.value(), spec.trials, Quantity::Ber(mode)))
}
