//! Metropolis-Hastings edge sampler with a uniform proposal.
//!
//! Each sampler keeps only the index of its last sample. A step proposes a
//! neighbor uniformly at random (zero-weight ones included) and accepts it with
//! probability `min(1, w'(candidate) / w'(last))`; on rejection the previous
//! sample is returned again. The chain's stationary distribution is the
//! normalized dynamic weight vector restricted to its support.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::EdgeRef;
use crate::models::{RandomWalkModel, WalkerState};

/// Uniform draws tried before the random initializer falls back to a scan.
const RANDOM_INIT_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    Random,
    HighWeight,
    BurnIn,
}

/// How a sampler picks its first sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitStrategy {
    /// Uniform over candidates with positive weight.
    Random,
    /// The heaviest of `min(degree, sample_size)` probed candidates; exact when
    /// the degree does not exceed `sample_size`. Ties go to the lowest index.
    HighWeight { sample_size: usize },
    /// A random start followed by `steps` discarded transitions.
    BurnIn { steps: usize },
}

impl InitStrategy {
    pub const DEFAULT_BURN_IN_STEPS: usize = 100;
    pub const DEFAULT_HW_SAMPLE_SIZE: usize = 32;

    pub fn high_weight() -> Self {
        InitStrategy::HighWeight {
            sample_size: Self::DEFAULT_HW_SAMPLE_SIZE,
        }
    }

    pub fn burn_in() -> Self {
        InitStrategy::BurnIn {
            steps: Self::DEFAULT_BURN_IN_STEPS,
        }
    }

    pub fn from_kind(kind: InitKind, burn_in_steps: usize, hw_sample_size: usize) -> Result<Self> {
        match kind {
            InitKind::Random => Ok(InitStrategy::Random),
            InitKind::HighWeight if hw_sample_size >= 1 => Ok(InitStrategy::HighWeight {
                sample_size: hw_sample_size,
            }),
            InitKind::BurnIn if burn_in_steps >= 1 => Ok(InitStrategy::BurnIn {
                steps: burn_in_steps,
            }),
            InitKind::HighWeight => Err(Error::Config("hw sample size must be >= 1".into())),
            InitKind::BurnIn => Err(Error::Config("burn-in steps must be >= 1".into())),
        }
    }

    pub fn kind(&self) -> InitKind {
        match self {
            InitStrategy::Random => InitKind::Random,
            InitStrategy::HighWeight { .. } => InitKind::HighWeight,
            InitStrategy::BurnIn { .. } => InitKind::BurnIn,
        }
    }
}

impl Default for InitStrategy {
    fn default() -> Self {
        InitStrategy::Random
    }
}

/// One M-H transition from `last` over `0..degree`. Returns the new sample and
/// whether the proposal was accepted.
#[inline]
pub fn mh_transition<R, W>(last: usize, degree: usize, weight: W, rng: &mut R) -> (usize, bool)
where
    R: Rng + ?Sized,
    W: Fn(usize) -> f64,
{
    let candidate = rng.gen_range(0..degree);
    if candidate == last {
        return (last, true);
    }
    let w_candidate = weight(candidate);
    let w_last = weight(last);
    let accept = if w_candidate >= w_last || w_last <= 0.0 {
        true
    } else {
        rng.gen::<f64>() * w_last < w_candidate
    };
    if accept {
        (candidate, true)
    } else {
        (last, false)
    }
}

fn random_positive<R, W>(degree: usize, weight: &W, rng: &mut R) -> Option<usize>
where
    R: Rng + ?Sized,
    W: Fn(usize) -> f64,
{
    if degree == 0 {
        return None;
    }
    for _ in 0..RANDOM_INIT_ATTEMPTS {
        let i = rng.gen_range(0..degree);
        if weight(i) > 0.0 {
            return Some(i);
        }
    }
    let positive: Vec<usize> = (0..degree).filter(|&i| weight(i) > 0.0).collect();
    positive.choose(rng).copied()
}

/// Persistent state of one M-H sampler: the index of its last sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(transparent)]
pub struct MhSampler {
    last: u32,
}

impl MhSampler {
    pub const UNINITIALIZED: MhSampler = MhSampler { last: u32::MAX };

    pub fn from_last(index: usize) -> Self {
        debug_assert!(index < u32::MAX as usize);
        MhSampler { last: index as u32 }
    }

    pub fn is_initialized(&self) -> bool {
        *self != Self::UNINITIALIZED
    }

    pub fn last(&self) -> Option<usize> {
        self.is_initialized().then_some(self.last as usize)
    }

    /// Chooses the first sample over `0..degree`. Returns `None` when no
    /// candidate has positive weight.
    pub fn initialize<R, W>(
        strategy: InitStrategy,
        degree: usize,
        weight: W,
        rng: &mut R,
    ) -> Option<MhSampler>
    where
        R: Rng + ?Sized,
        W: Fn(usize) -> f64,
    {
        let first = match strategy {
            InitStrategy::Random => random_positive(degree, &weight, rng)?,
            InitStrategy::HighWeight { sample_size } => {
                let mut best: Option<(usize, f64)> = None;
                let mut consider = |i: usize| {
                    let w = weight(i);
                    let better = match best {
                        None => w > 0.0,
                        Some((bi, bw)) => w > bw || (w == bw && i < bi),
                    };
                    if better {
                        best = Some((i, w));
                    }
                };
                if degree <= sample_size {
                    (0..degree).for_each(&mut consider);
                } else {
                    for _ in 0..sample_size {
                        consider(rng.gen_range(0..degree));
                    }
                }
                match best {
                    Some((i, _)) => i,
                    None => random_positive(degree, &weight, rng)?,
                }
            }
            InitStrategy::BurnIn { steps } => {
                let mut last = random_positive(degree, &weight, rng)?;
                for _ in 0..steps {
                    last = mh_transition(last, degree, &weight, rng).0;
                }
                last
            }
        };
        Some(MhSampler::from_last(first))
    }

    /// One transition; returns whether the proposal was accepted.
    #[inline]
    pub fn step<R, W>(&mut self, degree: usize, weight: W, rng: &mut R) -> bool
    where
        R: Rng + ?Sized,
        W: Fn(usize) -> f64,
    {
        debug_assert!(self.is_initialized());
        let (next, accepted) = mh_transition(self.last as usize, degree, weight, rng);
        self.last = next as u32;
        accepted
    }
}

/// Initializes a sampler for `state` of `model`.
pub fn mh_init<M, R>(
    strategy: InitStrategy,
    model: &M,
    state: WalkerState,
    rng: &mut R,
) -> Result<MhSampler>
where
    M: RandomWalkModel + ?Sized,
    R: Rng + ?Sized,
{
    let v = state.position;
    let degree = model.graph().degree(v);
    MhSampler::initialize(
        strategy,
        degree,
        |i| model.calculate_weight(state, EdgeRef::new(v, i)),
        rng,
    )
    .ok_or(Error::DeadEnd(v))
}

/// Advances `sampler` by one transition and returns the sampled edge.
pub fn mh_sample<M, R>(
    sampler: &mut MhSampler,
    model: &M,
    state: WalkerState,
    rng: &mut R,
) -> EdgeRef
where
    M: RandomWalkModel + ?Sized,
    R: Rng + ?Sized,
{
    let v = state.position;
    let degree = model.graph().degree(v);
    sampler.step(
        degree,
        |i| model.calculate_weight(state, EdgeRef::new(v, i)),
        rng,
    );
    EdgeRef::new(v, sampler.last as usize)
}
