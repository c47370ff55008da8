//! Command-line front end: `walk`, `check`, `simulate` and `bench`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{default_ratio_grid, simulate_grid_with, write_sim_csv, SimConfig};
use crate::audit::{audit_model, AuditConfig};
use crate::bench::{bench_sampler, write_bench_csv, BenchConfig};
use crate::engine::{generate_walks, write_corpus, SamplerKind, WalkConfig};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, load_edge_types, load_node_types, Graph, LoadOptions};
use crate::models::{parse_metapath, ModelKind, ModelParams, TypeMatrix};
use crate::samplers::{InitKind, InitStrategy};

/// Exit code of `check` when the worst state exceeds the tolerance.
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mhwalk", version, about = "Random walk generation with Metropolis-Hastings edge sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a walk corpus.
    Walk(WalkArgs),
    /// Compare sampled and exact transition distributions on random states.
    Check(CheckArgs),
    /// Compare random and high-weight initialization on synthetic targets.
    Simulate(SimulateArgs),
    /// Measure throughput, acceptance ratio and memory per sampler.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    /// Edge list: one "src dst [weight]" per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Read the third column as the edge weight.
    #[arg(long)]
    pub weighted: bool,
    /// Add the reverse of every edge.
    #[arg(long)]
    pub symmetrize: bool,
    /// Node type file: one "node type" per line.
    #[arg(long)]
    pub node_types: Option<PathBuf>,
    /// Edge type file: one "src dst type" per line.
    #[arg(long)]
    pub edge_types: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::DeepWalk)]
    pub model: ModelKind,
    /// Return parameter.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// In-out parameter.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Comma-separated node types, e.g. "0,1,0".
    #[arg(long)]
    pub metapath: Option<String>,
    /// CSV of edge-type transition weights (edge2vec).
    #[arg(long)]
    pub edge_matrix: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InitArgs {
    #[arg(long, value_enum, default_value_t = InitKind::Random)]
    pub init: InitKind,
    #[arg(long, default_value_t = InitStrategy::DEFAULT_BURN_IN_STEPS)]
    pub burn_in_steps: usize,
    #[arg(long, default_value_t = InitStrategy::DEFAULT_HW_SAMPLE_SIZE)]
    pub hw_sample_size: usize,
}

impl InitArgs {
    fn strategy(&self) -> Result<InitStrategy> {
        InitStrategy::from_kind(self.init, self.burn_in_steps, self.hw_sample_size)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WalkArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub init: InitArgs,
    #[arg(long, default_value_t = 10)]
    pub walks_per_node: usize,
    /// Maximum steps per walk.
    #[arg(long, default_value_t = 80)]
    pub walk_length: usize,
    #[arg(long, value_enum, default_value_t = SamplerKind::Mh)]
    pub sampler: SamplerKind,
    #[arg(long, env = "MHWALK_THREADS", default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corpus path; stats and manifest are written next to it.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub init: InitArgs,
    /// Number of random states to audit.
    #[arg(long, default_value_t = 100)]
    pub states: usize,
    /// M-H draws per state.
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Support size.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Number of maximal entries.
    #[arg(long, default_value_t = 200)]
    pub t: usize,
    /// Comma-separated values of pi_max / pi_min.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    pub distributions: usize,
    #[arg(long, default_value_t = 20)]
    pub repeats: usize,
    /// Chain draws per run; 5n when absent.
    #[arg(long)]
    pub samples_per_run: Option<usize>,
    #[arg(long, env = "MHWALK_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub init: InitArgs,
    /// Comma-separated samplers.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = SamplerKind::ALL)]
    pub samplers: Vec<SamplerKind>,
    /// Step budget per sampler.
    #[arg(long, default_value_t = 1_000_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 80)]
    pub walk_length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphDigest {
    pub nodes: usize,
    pub arcs: usize,
    pub symmetric: bool,
    pub checksum: String,
}

impl GraphDigest {
    pub fn of(graph: &Graph) -> GraphDigest {
        GraphDigest {
            nodes: graph.node_count(),
            arcs: graph.arc_count(),
            symmetric: graph.is_symmetric(),
            checksum: graph.checksum(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    #[serde(rename = "T_i")]
    pub init_seconds: f64,
    #[serde(rename = "T_w")]
    pub walk_seconds: f64,
}

/// Record of one run: resolved flags, graph digest, timings and version.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: C,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDigest>,
    pub timing: Timing,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<serde_json::Value>,
}

/// Path of the manifest written next to `output`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn emit_manifest<C: Serialize>(manifest: &RunManifest<C>, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
    match output {
        Some(out) => {
            let path = manifest_path(out);
            std::fs::write(&path, text).map_err(|e| Error::io(path, e))
        }
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn write_output(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

pub fn load_graph(args: &GraphArgs) -> Result<Graph> {
    let options = LoadOptions {
        weighted: args.weighted,
        symmetrize: args.symmetrize,
        node_count: None,
    };
    let mut graph = load_edge_list(&args.input, options)?;
    if let Some(path) = &args.node_types {
        graph = load_node_types(path, graph)?;
    }
    if let Some(path) = &args.edge_types {
        graph = load_edge_types(path, graph)?;
    }
    Ok(graph)
}

/// Builds model parameters; an absent edge2vec matrix means all ones.
pub fn model_params(args: &ModelArgs, graph: &Graph) -> Result<ModelParams> {
    Ok(match args.model {
        ModelKind::DeepWalk => ModelParams::deepwalk(),
        ModelKind::Node2Vec => ModelParams::node2vec(args.p, args.q),
        ModelKind::Fairwalk => ModelParams::fairwalk(args.p, args.q),
        ModelKind::Edge2Vec => {
            let matrix = match &args.edge_matrix {
                Some(path) => TypeMatrix::load_csv(path)?,
                None => TypeMatrix::ones(graph.num_edge_types()),
            };
            ModelParams::edge2vec(args.p, args.q, matrix)
        }
        ModelKind::Metapath2Vec => {
            let text = args
                .metapath
                .as_deref()
                .ok_or_else(|| Error::Config("metapath2vec needs --metapath".into()))?;
            ModelParams::metapath2vec(parse_metapath(text)?)
        }
    })
}

fn cmd_walk(args: &WalkArgs) -> Result<i32> {
    let init = args.init.strategy()?;
    let graph = load_graph(&args.graph)?;
    let model = model_params(&args.model, &graph)?.bind(&graph)?;
    let config = WalkConfig {
        walks_per_node: args.walks_per_node,
        walk_length: args.walk_length,
        threads: args.threads,
        seed: args.seed,
        sampler: args.sampler,
        init,
    };
    let corpus = generate_walks(&model, &config)?;
    write_corpus(&corpus, &args.output)?;
    emit_manifest(
        &RunManifest {
            command: "walk",
            version: env!("CARGO_PKG_VERSION"),
            config: args,
            graph: Some(GraphDigest::of(&graph)),
            timing: Timing {
                init_seconds: corpus.stats.init_seconds,
                walk_seconds: corpus.stats.walk_seconds,
            },
            stats: Some(serde_json::to_value(&corpus.stats).expect("stats serialize")),
        },
        Some(&args.output),
    )?;
    Ok(0)
}

fn cmd_check(args: &CheckArgs) -> Result<i32> {
    let init = args.init.strategy()?;
    if !(args.tolerance >= 0.0) {
        return Err(Error::Config("tolerance must be non-negative".into()));
    }
    let graph = load_graph(&args.graph)?;
    let model = model_params(&args.model, &graph)?.bind(&graph)?;
    let started = std::time::Instant::now();
    let report = audit_model(
        &model,
        &AuditConfig {
            states: args.states,
            draws: args.draws,
            init,
            seed: args.seed,
        },
    )?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv).expect("write to memory");
    write_output(args.output.as_deref(), &csv)?;
    let max = report.max_kl();
    emit_manifest(
        &RunManifest {
            command: "check",
            version: env!("CARGO_PKG_VERSION"),
            config: args,
            graph: Some(GraphDigest::of(&graph)),
            timing: Timing {
                init_seconds: 0.0,
                walk_seconds: started.elapsed().as_secs_f64(),
            },
            stats: Some(serde_json::json!({ "states": report.states.len(), "max_kl": max })),
        },
        args.output.as_deref(),
    )?;
    Ok(if max < args.tolerance { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let samples = args.samples_per_run.unwrap_or(5 * args.n);
    SimConfig {
        distributions: args.distributions,
        repeats: args.repeats,
        samples_per_run: samples,
        ..SimConfig::new(args.n, args.t, 1.0)
    }
    .validate()?;
    let ratios = args
        .ratios
        .clone()
        .unwrap_or_else(|| default_ratio_grid(args.n, args.t));
    let run = || -> Result<_> {
        let started = std::time::Instant::now();
        let results = simulate_grid_with(
            args.n,
            args.t,
            &ratios,
            args.distributions,
            args.repeats,
            samples,
            args.seed,
        )?;
        Ok((results, started.elapsed().as_secs_f64()))
    };
    let (results, seconds) = match args.threads {
        Some(0) => return Err(Error::Config("thread count must be positive".into())),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let mut csv = Vec::new();
    write_sim_csv(&results, &mut csv).expect("write to memory");
    write_output(args.output.as_deref(), &csv)?;
    emit_manifest(
        &RunManifest {
            command: "simulate",
            version: env!("CARGO_PKG_VERSION"),
            config: args,
            graph: None,
            timing: Timing {
                init_seconds: 0.0,
                walk_seconds: seconds,
            },
            stats: None,
        },
        args.output.as_deref(),
    )?;
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let init = args.init.strategy()?;
    let graph = load_graph(&args.graph)?;
    let model = model_params(&args.model, &graph)?.bind(&graph)?;
    let config = BenchConfig {
        steps: args.steps,
        walk_length: args.walk_length,
        init,
        seed: args.seed,
    };
    let rows = args
        .samplers
        .iter()
        .map(|&kind| bench_sampler(&model, kind, &config))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Vec::new();
    write_bench_csv(&rows, &mut csv).expect("write to memory");
    write_output(args.output.as_deref(), &csv)?;
    emit_manifest(
        &RunManifest {
            command: "bench",
            version: env!("CARGO_PKG_VERSION"),
            config: args,
            graph: Some(GraphDigest::of(&graph)),
            timing: Timing {
                init_seconds: rows.iter().map(|r| r.init_seconds).sum(),
                walk_seconds: rows.iter().map(|r| r.seconds).sum(),
            },
            stats: Some(serde_json::to_value(&rows).expect("rows serialize")),
        },
        args.output.as_deref(),
    )?;
    Ok(0)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Walk(a) => cmd_walk(a),
        Command::Check(a) => cmd_check(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
