//! Parallel walk generation.
//!
//! Every node that the model accepts as a start spawns `walks_per_node`
//! walkers. Each walker repeatedly looks up the sampler for its state, draws
//! the next edge, and updates its state, for at most `walk_length` steps. The
//! (start, k) grid is split into equal contiguous blocks, one per thread.
//!
//! Each walker owns a ChaCha stream selected by `start * walks_per_node + k`
//! under the run seed, so a walker's random numbers do not depend on the
//! thread schedule. Only the shared M-H slots can make multi-threaded runs
//! differ; a single-threaded run is reproducible bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, NodeId};
use crate::manager::{SamplerManager, SlotLayout};
use crate::models::{RandomWalkModel, WalkerState};
use crate::samplers::{direct_sample_with, AliasTable, InitStrategy, RejectionProposal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Mh,
    Alias,
    Direct,
    Rejection,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 4] = [
        SamplerKind::Mh,
        SamplerKind::Alias,
        SamplerKind::Direct,
        SamplerKind::Rejection,
    ];
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SamplerKind::Mh => "mh",
            SamplerKind::Alias => "alias",
            SamplerKind::Direct => "direct",
            SamplerKind::Rejection => "rejection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Maximum number of steps; a walk holds at most `walk_length + 1` nodes.
    pub walk_length: usize,
    pub threads: usize,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub init: InitStrategy,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 10,
            walk_length: 80,
            threads: 1,
            seed: 0,
            sampler: SamplerKind::Mh,
            init: InitStrategy::Random,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walks_per_node == 0 {
            return Err(Error::Config("walks per node must be positive".into()));
        }
        if self.walk_length == 0 {
            return Err(Error::Config("walk length must be positive".into()));
        }
        if self.threads == 0 {
            return Err(Error::Config("thread count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub walks: usize,
    /// Walks that stopped before `walk_length` steps (dead end or isolated node).
    pub early_terminations: usize,
    /// Nodes the model refused as start nodes.
    pub skipped_starts: usize,
    pub steps: u64,
    /// Candidate draws made by M-H or rejection samplers.
    pub proposals: u64,
    /// Candidate draws that were accepted.
    pub accepted: u64,
    pub init_seconds: f64,
    pub walk_seconds: f64,
    pub steps_per_sec: f64,
    pub initialized_samplers: usize,
    pub sampler_memory_bytes: usize,
}

impl RunStats {
    /// Fraction of proposals accepted; 1 when no proposals were made.
    pub fn acceptance_ratio(&self) -> f64 {
        if self.proposals == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

/// Walk sequences stored back to back.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WalkCorpus {
    offsets: Vec<usize>,
    nodes: Vec<NodeId>,
    pub stats: RunStats,
}

impl WalkCorpus {
    pub fn from_walks<I, W>(walks: I) -> WalkCorpus
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[NodeId]>,
    {
        let mut corpus = WalkCorpus {
            offsets: vec![0],
            ..Default::default()
        };
        for w in walks {
            corpus.nodes.extend_from_slice(w.as_ref());
            corpus.offsets.push(corpus.nodes.len());
        }
        corpus.stats.walks = corpus.len();
        corpus
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn walk(&self, i: usize) -> &[NodeId] {
        &self.nodes[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn walks(&self) -> impl Iterator<Item = &[NodeId]> + '_ {
        (0..self.len()).map(move |i| self.walk(i))
    }

    /// One walk per line, node ids separated by single spaces.
    pub fn write_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let mut line = String::new();
        for walk in self.walks() {
            line.clear();
            for (i, v) in walk.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                line.push_str(&v.to_string());
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()
    }

    /// The stats line written to the sidecar file.
    pub fn stats_json(&self) -> serde_json::Value {
        serde_json::json!({
            "walks": self.stats.walks,
            "early_terminations": self.stats.early_terminations,
            "skipped_starts": self.stats.skipped_starts,
            "steps_per_sec": self.stats.steps_per_sec,
            "steps": self.stats.steps,
            "walk_length_unit": "steps",
        })
    }
}

/// Sidecar path holding the JSON-lines run stats for a corpus file.
pub fn stats_path(corpus_path: &Path) -> PathBuf {
    let mut name = corpus_path.as_os_str().to_owned();
    name.push(".stats.jsonl");
    PathBuf::from(name)
}

/// Writes the corpus to `path` and its stats to [`stats_path`].
pub fn write_corpus(corpus: &WalkCorpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    corpus
        .write_to(&mut BufWriter::new(file))
        .map_err(|e| Error::io(path, e))?;
    let sidecar = stats_path(path);
    let mut line = corpus.stats_json().to_string();
    line.push('\n');
    std::fs::write(&sidecar, line).map_err(|e| Error::io(sidecar, e))
}

/// Reads a corpus written by [`write_corpus`] (stats are not restored).
pub fn read_corpus(path: impl AsRef<Path>) -> Result<WalkCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut walks = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let walk = line
            .split(' ')
            .map(|f| {
                f.parse::<NodeId>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: format!("invalid node id {f:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        walks.push(walk);
    }
    Ok(WalkCorpus::from_walks(walks))
}

/// Per-thread tallies, merged after the run.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Counters {
    pub steps: u64,
    pub proposals: u64,
    pub accepted: u64,
    pub early_terminations: usize,
}

enum Backend {
    Mh(SamplerManager),
    Alias {
        layout: SlotLayout,
        tables: Vec<OnceLock<Option<AliasTable>>>,
    },
    Direct,
    Rejection {
        proposals: Vec<OnceLock<Option<RejectionProposal>>>,
        bound: f64,
    },
}

/// The edge-sampling machinery behind a walk run, built once per model.
pub struct EdgeSampler {
    backend: Backend,
    init: InitStrategy,
    build_nanos: AtomicU64,
}

impl EdgeSampler {
    pub fn new<M: RandomWalkModel + ?Sized>(
        model: &M,
        kind: SamplerKind,
        init: InitStrategy,
    ) -> Result<EdgeSampler> {
        let backend = match kind {
            SamplerKind::Mh => Backend::Mh(SamplerManager::build(model)?),
            SamplerKind::Alias => {
                let layout = SlotLayout::new(model, std::mem::size_of::<OnceLock<Option<AliasTable>>>())?;
                let tables = (0..layout.total_slots()).map(|_| OnceLock::new()).collect();
                Backend::Alias { layout, tables }
            }
            SamplerKind::Direct => Backend::Direct,
            SamplerKind::Rejection => Backend::Rejection {
                proposals: (0..model.graph().node_count()).map(|_| OnceLock::new()).collect(),
                bound: model.weight_envelope(),
            },
        };
        Ok(EdgeSampler {
            backend,
            init,
            build_nanos: AtomicU64::new(0),
        })
    }

    pub fn manager(&self) -> Option<&SamplerManager> {
        match &self.backend {
            Backend::Mh(m) => Some(m),
            _ => None,
        }
    }

    /// Seconds spent initializing samplers or building per-state tables.
    pub fn init_seconds(&self) -> f64 {
        let built = self.build_nanos.load(Ordering::Relaxed) as f64 * 1e-9;
        match &self.backend {
            Backend::Mh(m) => m.init_seconds(),
            _ => built,
        }
    }

    pub fn initialized_samplers(&self) -> usize {
        match &self.backend {
            Backend::Mh(m) => m.initialized_slots(),
            Backend::Alias { tables, .. } => tables.iter().filter(|t| t.get().is_some()).count(),
            Backend::Direct => 0,
            Backend::Rejection { proposals, .. } => {
                proposals.iter().filter(|p| p.get().is_some()).count()
            }
        }
    }

    /// Auxiliary memory held by samplers, excluding the graph.
    pub fn memory_bytes(&self) -> usize {
        match &self.backend {
            Backend::Mh(m) => m.memory_bytes(),
            Backend::Alias { layout, tables } => {
                layout.memory_bytes()
                    + tables
                        .iter()
                        .filter_map(|t| t.get().and_then(Option::as_ref))
                        .map(AliasTable::memory_bytes)
                        .sum::<usize>()
            }
            Backend::Direct => 0,
            Backend::Rejection { proposals, .. } => proposals
                .iter()
                .filter_map(|p| p.get().and_then(Option::as_ref))
                .map(RejectionProposal::memory_bytes)
                .sum(),
        }
    }

    fn timed<T>(&self, f: impl FnOnce() -> T) -> T {
        let started = Instant::now();
        let out = f();
        self.build_nanos
            .fetch_add(started.elapsed().as_nanos() as u64, Ordering::Relaxed);
        out
    }

    /// Draws the next edge for `state`; `Ok(None)` at a dead end.
    pub(crate) fn next_edge<M, R>(
        &self,
        model: &M,
        state: WalkerState,
        rng: &mut R,
        counters: &mut Counters,
    ) -> Result<Option<EdgeRef>>
    where
        M: RandomWalkModel + ?Sized,
        R: Rng + ?Sized,
    {
        let v = state.position;
        let degree = model.graph().degree(v);
        if degree == 0 {
            return Ok(None);
        }
        let weight = |i: usize| model.calculate_weight(state, EdgeRef::new(v, i));
        if model.slot_affix(state).is_none() {
            return Ok(direct_sample_with(degree, weight, rng).map(|i| EdgeRef::new(v, i)));
        }
        match &self.backend {
            Backend::Mh(manager) => match manager.query_sampler(model, state, self.init, rng) {
                Ok(handle) => {
                    let (edge, accepted) = handle.sample(model, state, rng);
                    counters.proposals += 1;
                    counters.accepted += accepted as u64;
                    Ok(Some(edge))
                }
                Err(Error::DeadEnd(_)) => Ok(None),
                Err(e) => Err(e),
            },
            Backend::Alias { layout, tables } => {
                let slot = layout.slot_of(model, state).expect("managed state");
                let table = tables[slot].get_or_init(|| {
                    self.timed(|| {
                        let weights: Vec<f64> = (0..degree).map(weight).collect();
                        AliasTable::new(&weights).ok()
                    })
                });
                Ok(table.as_ref().map(|t| EdgeRef::new(v, t.sample(rng))))
            }
            Backend::Direct => Ok(direct_sample_with(degree, weight, rng).map(|i| EdgeRef::new(v, i))),
            Backend::Rejection { proposals, bound } => {
                let proposal = proposals[v as usize].get_or_init(|| {
                    self.timed(|| RejectionProposal::new(model.graph().weights(v), *bound).ok())
                });
                let Some(proposal) = proposal else {
                    return Ok(None);
                };
                match proposal.sample_with(weight, rng)? {
                    Some((i, trials)) => {
                        counters.proposals += trials;
                        counters.accepted += 1;
                        Ok(Some(EdgeRef::new(v, i)))
                    }
                    None => Ok(None),
                }
            }
        }
    }

    /// Runs one walker from `start`, appending its nodes to `out`. Returns
    /// whether the walk stopped early.
    pub(crate) fn walk<M, R>(
        &self,
        model: &M,
        start: WalkerState,
        walk_length: usize,
        rng: &mut R,
        out: &mut Vec<NodeId>,
        counters: &mut Counters,
    ) -> Result<bool>
    where
        M: RandomWalkModel + ?Sized,
        R: Rng + ?Sized,
    {
        let mut state = start;
        out.push(state.position);
        for _ in 0..walk_length {
            match self.next_edge(model, state, rng, counters)? {
                Some(edge) => {
                    state = model.update_state(state, edge);
                    out.push(state.position);
                    counters.steps += 1;
                }
                None => return Ok(true),
            }
        }
        Ok(false)
    }
}

/// Independent random stream for walker `k` of `start`.
pub fn walker_rng(seed: u64, start: NodeId, k: usize, walks_per_node: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64 * walks_per_node as u64 + k as u64);
    rng
}

/// Generates `walks_per_node` walks from every admissible start node.
pub fn generate_walks<M: RandomWalkModel + ?Sized>(
    model: &M,
    config: &WalkConfig,
) -> Result<WalkCorpus> {
    config.validate()?;
    let sampler = EdgeSampler::new(model, config.sampler, config.init)?;
    generate_walks_with(model, config, &sampler)
}

/// As [`generate_walks`], reusing `sampler` (and any state it already holds).
pub fn generate_walks_with<M: RandomWalkModel + ?Sized>(
    model: &M,
    config: &WalkConfig,
    sampler: &EdgeSampler,
) -> Result<WalkCorpus> {
    config.validate()?;
    let graph = model.graph();
    let mut starts = Vec::with_capacity(graph.node_count());
    for v in 0..graph.node_count() as NodeId {
        if let Some(state) = model.initial_state(v) {
            starts.push(state);
        }
    }
    let skipped_starts = graph.node_count() - starts.len();
    let k = config.walks_per_node;
    let total = starts.len() * k;
    let threads = config.threads.min(total.max(1));
    let block = total.div_ceil(threads).max(1);

    let run_block = |range: std::ops::Range<usize>| -> Result<(Vec<NodeId>, Vec<usize>, Counters)> {
        let mut nodes = Vec::with_capacity(range.len() * (config.walk_length + 1));
        let mut ends = Vec::with_capacity(range.len());
        let mut counters = Counters::default();
        for g in range {
            let start = starts[g / k];
            let mut rng = walker_rng(config.seed, start.position, g % k, k);
            let early = sampler.walk(
                model,
                start,
                config.walk_length,
                &mut rng,
                &mut nodes,
                &mut counters,
            )?;
            counters.early_terminations += early as usize;
            ends.push(nodes.len());
        }
        Ok((nodes, ends, counters))
    };

    let started = Instant::now();
    let blocks: Vec<Result<(Vec<NodeId>, Vec<usize>, Counters)>> = if threads == 1 {
        vec![run_block(0..total)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let range = (t * block).min(total)..((t + 1) * block).min(total);
                    let run_block = &run_block;
                    s.spawn(move || run_block(range))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("walker thread panicked"))
                .collect()
        })
    };
    let walk_seconds = started.elapsed().as_secs_f64();

    let mut corpus = WalkCorpus {
        offsets: Vec::with_capacity(total + 1),
        nodes: Vec::new(),
        stats: RunStats::default(),
    };
    corpus.offsets.push(0);
    let mut counters = Counters::default();
    for block in blocks {
        let (nodes, ends, c) = block?;
        let base = corpus.nodes.len();
        corpus.nodes.extend_from_slice(&nodes);
        corpus.offsets.extend(ends.into_iter().map(|e| base + e));
        counters.steps += c.steps;
        counters.proposals += c.proposals;
        counters.accepted += c.accepted;
        counters.early_terminations += c.early_terminations;
    }

    corpus.stats = RunStats {
        walks: corpus.len(),
        early_terminations: counters.early_terminations,
        skipped_starts,
        steps: counters.steps,
        proposals: counters.proposals,
        accepted: counters.accepted,
        init_seconds: sampler.init_seconds(),
        walk_seconds,
        steps_per_sec: if walk_seconds > 0.0 {
            counters.steps as f64 / walk_seconds
        } else {
            0.0
        },
        initialized_samplers: sampler.initialized_samplers(),
        sampler_memory_bytes: sampler.memory_bytes(),
    };
    Ok(corpus)
}
