//! Throughput and acceptance measurements per sampler.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{Counters, EdgeSampler, SamplerKind};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::models::RandomWalkModel;
use crate::samplers::InitStrategy;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    /// Step budget per sampler.
    pub steps: u64,
    pub walk_length: usize,
    pub init: InitStrategy,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            steps: 1_000_000,
            walk_length: 80,
            init: InitStrategy::Random,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub sampler: SamplerKind,
    pub steps: u64,
    pub seconds: f64,
    pub steps_per_sec: f64,
    /// Accepted over proposed candidates; 1 for samplers that never reject.
    pub acceptance_ratio: f64,
    pub init_seconds: f64,
    pub memory_bytes: usize,
}

/// Walks from start nodes in round-robin order on one thread until the step
/// budget is spent, then reports throughput for `kind`.
pub fn bench_sampler<M: RandomWalkModel + ?Sized>(
    model: &M,
    kind: SamplerKind,
    config: &BenchConfig,
) -> Result<BenchRow> {
    if config.steps == 0 || config.walk_length == 0 {
        return Err(Error::Config("steps and walk length must be positive".into()));
    }
    let graph = model.graph();
    let starts: Vec<_> = (0..graph.node_count() as NodeId)
        .filter_map(|v| model.initial_state(v))
        .filter(|s| graph.degree(s.position) > 0)
        .collect();
    if starts.is_empty() {
        return Err(Error::Validation("no start node with outgoing edges".into()));
    }
    let sampler = EdgeSampler::new(model, kind, config.init)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut counters = Counters::default();
    let mut nodes = Vec::with_capacity(config.walk_length + 1);
    let started = Instant::now();
    let mut next_start = 0;
    while counters.steps < config.steps {
        let before = counters.steps;
        nodes.clear();
        let remaining = (config.steps - counters.steps) as usize;
        sampler.walk(
            model,
            starts[next_start],
            config.walk_length.min(remaining),
            &mut rng,
            &mut nodes,
            &mut counters,
        )?;
        next_start = (next_start + 1) % starts.len();
        if next_start == 0 && counters.steps == before {
            return Err(Error::Validation("every walk stopped immediately".into()));
        }
    }
    let seconds = started.elapsed().as_secs_f64();
    let acceptance_ratio = if counters.proposals == 0 {
        1.0
    } else {
        counters.accepted as f64 / counters.proposals as f64
    };
    Ok(BenchRow {
        sampler: kind,
        steps: counters.steps,
        seconds,
        steps_per_sec: counters.steps as f64 / seconds.max(f64::MIN_POSITIVE),
        acceptance_ratio,
        init_seconds: sampler.init_seconds(),
        memory_bytes: sampler.memory_bytes(),
    })
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: &mut W) -> std::io::Result<()> {
    writeln!(
        out,
        "sampler,steps,seconds,steps_per_sec,acceptance_ratio,init_seconds,memory_bytes"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{:.6},{:.1},{:.4},{:.6},{}",
            r.sampler, r.steps, r.seconds, r.steps_per_sec, r.acceptance_ratio, r.init_seconds, r.memory_bytes
        )?;
    }
    out.flush()
}
