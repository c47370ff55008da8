//! Convergence analysis for the M-H edge sampler.
//!
//! Everything here works on an explicit finite target `π` over `n` outcomes,
//! sampled with a uniform proposal over the same outcomes. The chain after `i`
//! steps from an initial distribution `π⁰` has law `π^i`, and
//!
//! ```text
//! KL(π^i, π) <= κ ρ^i (1 + κ ρ^i),   κ = ‖π⁰/π − 1‖∞,   ρ = 1 − 1/(n π_max)
//! ```
//!
//! Random initialization uses `π⁰` uniform; high-weight initialization uses
//! `π⁰` uniform over the `t` maximal entries.

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::samplers::{mh_transition, InitStrategy, MhSampler};

/// Relative tolerance used to decide which entries are maximal.
const TIE_TOLERANCE: f64 = 1e-12;

/// A finite discrete distribution with strictly positive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetDistribution {
    probs: Vec<f64>,
    pi_max: f64,
    pi_min: f64,
    t: usize,
}

impl TargetDistribution {
    /// Normalizes positive finite `weights`.
    pub fn new(weights: &[f64]) -> Result<TargetDistribution> {
        if weights.is_empty() {
            return Err(Error::Domain("distribution needs at least one entry".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain(format!("entry {w} is not positive and finite")));
        }
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let pi_max = probs.iter().copied().fold(f64::MIN, f64::max);
        let pi_min = probs.iter().copied().fold(f64::MAX, f64::min);
        let t = probs
            .iter()
            .filter(|&&p| pi_max - p <= TIE_TOLERANCE * pi_max)
            .count();
        Ok(TargetDistribution {
            probs,
            pi_max,
            pi_min,
            t,
        })
    }

    /// Uses `probs` as given after checking they sum to one.
    pub fn from_probs(probs: &[f64]) -> Result<TargetDistribution> {
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        TargetDistribution::new(probs)
    }

    pub fn uniform(n: usize) -> Result<TargetDistribution> {
        TargetDistribution::new(&vec![1.0; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn pi_max(&self) -> f64 {
        self.pi_max
    }

    pub fn pi_min(&self) -> f64 {
        self.pi_min
    }

    /// Number of entries equal to `pi_max`.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn skew(&self) -> f64 {
        self.pi_max / self.pi_min
    }

    fn is_max(&self, p: f64) -> bool {
        self.pi_max - p <= TIE_TOLERANCE * self.pi_max
    }
}

/// `KL(p, q) = Σ p_i ln(p_i / q_i)`, with `0 ln 0 = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Domain(format!(
            "KL between lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    let mut kl = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if !(qi > 0.0) {
                return Err(Error::Domain(format!(
                    "q is zero at {i} where p is positive"
                )));
            }
            kl += pi * (pi / qi).ln();
        }
    }
    Ok(kl.max(0.0))
}

/// Relative frequencies of `counts`.
pub fn empirical(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// KL of the empirical distribution of `counts` against `target`.
pub fn empirical_kl(counts: &[u64], target: &[f64]) -> Result<f64> {
    kl_divergence(&empirical(counts), target)
}

/// Minorization coefficient `a = 1 / (deg π_max)` of the uniform-proposal chain.
pub fn mh_coefficient_a(dist: &TargetDistribution, deg: usize) -> f64 {
    1.0 / (deg as f64 * dist.pi_max)
}

/// `κ ρ^i (1 + κ ρ^i)` with `ρ = 1 − a`.
pub fn kl_upper_bound(kappa: f64, a: f64, i: u32) -> f64 {
    let x = kappa * (1.0 - a).powi(i as i32);
    x * (1.0 + x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitDistribution {
    Random,
    HighWeight,
}

/// Initial law of the chain under `init`.
pub fn initial_distribution(init: InitDistribution, dist: &TargetDistribution) -> Vec<f64> {
    let n = dist.n();
    match init {
        InitDistribution::Random => vec![1.0 / n as f64; n],
        InitDistribution::HighWeight => {
            let t = dist.t() as f64;
            dist.probs
                .iter()
                .map(|&p| if dist.is_max(p) { 1.0 / t } else { 0.0 })
                .collect()
        }
    }
}

/// `‖π⁰/π − 1‖∞`.
pub fn kappa_generic(pi0: &[f64], pi: &[f64]) -> f64 {
    pi0.iter()
        .zip(pi)
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max)
}

/// `max{1/(t π_max) − 1, 1}`, or 0 when every entry is maximal.
pub fn kappa_high_weight(dist: &TargetDistribution) -> f64 {
    if dist.t() == dist.n() {
        return 0.0;
    }
    (1.0 / (dist.t() as f64 * dist.pi_max) - 1.0).max(1.0)
}

/// `max{1 − 1/(n π_max), 1/(n π_min) − 1}`.
pub fn kappa_random(dist: &TargetDistribution) -> f64 {
    let n = dist.n() as f64;
    (1.0 - 1.0 / (n * dist.pi_max)).max(1.0 / (n * dist.pi_min) - 1.0)
}

pub fn kappa_for(init: InitDistribution, dist: &TargetDistribution) -> f64 {
    match init {
        InitDistribution::Random => kappa_random(dist),
        InitDistribution::HighWeight => kappa_high_weight(dist),
    }
}

/// Whether high-weight initialization has the smaller κ:
/// `π_max < 1/(2t) ∧ π_max/π_min > n/t`, or `π_max ≥ 1/(2t) ∧ π_min < 1/(2n)`.
pub fn high_weight_better(dist: &TargetDistribution) -> bool {
    let n = dist.n() as f64;
    let t = dist.t() as f64;
    let half_t = 1.0 / (2.0 * t);
    (dist.pi_max < half_t && dist.skew() > n / t)
        || (dist.pi_max >= half_t && dist.pi_min < 1.0 / (2.0 * n))
}

/// Row-major transition matrix of the uniform-proposal M-H chain:
/// `P(i→j) = min{1, π_j/π_i} / n` off the diagonal, rejections on the diagonal.
pub fn mh_kernel(pi: &[f64]) -> Vec<Vec<f64>> {
    let n = pi.len();
    let inv_n = 1.0 / n as f64;
    (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        inv_n * (pi[j] / pi[i]).min(1.0)
                    }
                })
                .collect();
            row[i] = 1.0 - row.iter().sum::<f64>();
            row
        })
        .collect()
}

/// One step of the chain: `dist · kernel`.
pub fn evolve(dist: &[f64], kernel: &[Vec<f64>]) -> Vec<f64> {
    let mut next = vec![0.0; dist.len()];
    for (p, row) in dist.iter().zip(kernel) {
        if *p != 0.0 {
            for (acc, k) in next.iter_mut().zip(row) {
                *acc += p * k;
            }
        }
    }
    next
}

/// `[π⁰, π¹, …, π^steps]` for the chain targeting `pi`.
pub fn chain_distributions(pi: &[f64], pi0: &[f64], steps: usize) -> Vec<Vec<f64>> {
    let kernel = mh_kernel(pi);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(pi0.to_vec());
    for i in 0..steps {
        let next = evolve(&out[i], &kernel);
        out.push(next);
    }
    out
}

/// Parameters of the initialization-strategy comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub t: usize,
    /// `π_max / π_min` of every generated target.
    pub ratio: f64,
    pub distributions: usize,
    pub repeats: usize,
    pub samples_per_run: usize,
}

impl SimConfig {
    pub fn new(n: usize, t: usize, ratio: f64) -> SimConfig {
        SimConfig {
            n,
            t,
            ratio,
            distributions: 1000,
            repeats: 20,
            samples_per_run: 5 * n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.n < self.t + 1 {
            return Err(Error::Config(format!(
                "need n >= t + 1 and t >= 1, got n = {}, t = {}",
                self.n, self.t
            )));
        }
        if !(self.ratio >= 1.0) || !self.ratio.is_finite() {
            return Err(Error::Config(format!("ratio {} must be >= 1", self.ratio)));
        }
        if self.distributions == 0 || self.repeats == 0 || self.samples_per_run == 0 {
            return Err(Error::Config(
                "distributions, repeats and samples per run must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A random target with `t` entries at `ratio`, one at 1, and the rest drawn
/// from the open interval `(1, ratio)`, in shuffled order.
pub fn generate_target<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    ratio: f64,
    rng: &mut R,
) -> Result<TargetDistribution> {
    let probe = SimConfig {
        distributions: 1,
        repeats: 1,
        samples_per_run: 1,
        ..SimConfig::new(n, t, ratio)
    };
    probe.validate()?;
    let mut weights = Vec::with_capacity(n);
    weights.extend(std::iter::repeat_n(ratio, t));
    weights.push(1.0);
    while weights.len() < n {
        let w = if ratio > 1.0 {
            rng.gen_range(1.0..ratio)
        } else {
            1.0
        };
        if ratio == 1.0 || (w > 1.0 && w < ratio) {
            weights.push(w);
        }
    }
    weights.shuffle(rng);
    TargetDistribution::new(&weights)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n: usize,
    pub t: usize,
    pub ratio: f64,
    pub kl_random: f64,
    pub kl_high: f64,
    pub kl_ratio: f64,
}

/// KL of `samples` chain draws from the given starting sample.
fn run_chain(dist: &TargetDistribution, start: usize, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let probs = dist.probs();
    let n = probs.len();
    let mut counts = vec![0u64; n];
    let mut last = start;
    for _ in 0..samples {
        last = mh_transition(last, n, |i| probs[i], rng).0;
        counts[last] += 1;
    }
    empirical_kl(&counts, probs).expect("chain stays on the support")
}

/// Mean KL of random- versus high-weight-initialized chains over
/// `distributions` targets and `repeats` runs each. Both strategies of one run
/// share a random stream. The result depends only on the seed drawn from `rng`.
pub fn run_init_simulation<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Result<SimResult> {
    config.validate()?;
    let base: u64 = rng.gen();
    let per_dist: Vec<(f64, f64)> = (0..config.distributions)
        .into_par_iter()
        .map(|d| {
            let mut rng = ChaCha8Rng::seed_from_u64(base);
            rng.set_stream(d as u64);
            let dist = generate_target(config.n, config.t, config.ratio, &mut rng)?;
            let weights = dist.probs();
            let (mut kl_r, mut kl_h) = (0.0, 0.0);
            for _ in 0..config.repeats {
                let run_seed: u64 = rng.gen();
                // init draws come from their own stream so both chains see
                // identical proposals
                let mut init = ChaCha8Rng::seed_from_u64(run_seed);
                init.set_stream(1);
                let start = MhSampler::initialize(InitStrategy::Random, config.n, |i| weights[i], &mut init)
                    .and_then(|s| s.last())
                    .expect("positive target");
                let mut run = ChaCha8Rng::seed_from_u64(run_seed);
                kl_r += run_chain(&dist, start, config.samples_per_run, &mut run);

                let exact = InitStrategy::HighWeight {
                    sample_size: config.n,
                };
                let start = MhSampler::initialize(exact, config.n, |i| weights[i], &mut init)
                    .and_then(|s| s.last())
                    .expect("positive target");
                let mut run = ChaCha8Rng::seed_from_u64(run_seed);
                kl_h += run_chain(&dist, start, config.samples_per_run, &mut run);
            }
            Ok((kl_r, kl_h))
        })
        .collect::<Result<_>>()?;
    let runs = (config.distributions * config.repeats) as f64;
    let kl_random = per_dist.iter().map(|r| r.0).sum::<f64>() / runs;
    let kl_high = per_dist.iter().map(|r| r.1).sum::<f64>() / runs;
    Ok(SimResult {
        n: config.n,
        t: config.t,
        ratio: config.ratio,
        kl_random,
        kl_high,
        kl_ratio: kl_random / kl_high,
    })
}

/// `{1, 2, n/(2t), n/t, 2n/t, 10n/t}` clipped to at least 1, sorted, deduplicated.
pub fn default_ratio_grid(n: usize, t: usize) -> Vec<f64> {
    let r = n as f64 / t as f64;
    let mut grid: Vec<f64> = [1.0, 2.0, r / 2.0, r, 2.0 * r, 10.0 * r]
        .into_iter()
        .map(|x| x.max(1.0))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// One [`run_init_simulation`] per ratio with `5n` draws per run, each seeded
/// from `seed` and its position in `ratios`.
pub fn simulate_grid(
    n: usize,
    t: usize,
    ratios: &[f64],
    distributions: usize,
    repeats: usize,
    seed: u64,
) -> Result<Vec<SimResult>> {
    simulate_grid_with(n, t, ratios, distributions, repeats, 5 * n, seed)
}

/// As [`simulate_grid`] with an explicit number of draws per run.
pub fn simulate_grid_with(
    n: usize,
    t: usize,
    ratios: &[f64],
    distributions: usize,
    repeats: usize,
    samples_per_run: usize,
    seed: u64,
) -> Result<Vec<SimResult>> {
    ratios
        .iter()
        .enumerate()
        .map(|(k, &ratio)| {
            let config = SimConfig {
                distributions,
                repeats,
                samples_per_run,
                ..SimConfig::new(n, t, ratio)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            run_init_simulation(&config, &mut rng)
        })
        .collect()
}

pub const SIM_CSV_HEADER: &str = "n,t,ratio,kl_random,kl_high,kl_ratio";

pub fn write_sim_csv<W: Write>(results: &[SimResult], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{SIM_CSV_HEADER}")?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.t, r.ratio, r.kl_random, r.kl_high, r.kl_ratio
        )?;
    }
    out.flush()
}

pub fn save_sim_csv(results: &[SimResult], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_sim_csv(results, &mut buf).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
