//! Throughput, acceptance and memory of every sampler on one node2vec model.

use mhwalk::bench::{bench_sampler, write_bench_csv, BenchConfig};
use mhwalk::graph::synth;
use mhwalk::{ModelParams, SamplerKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let graph = synth::power_law_graph(5_000, 100_000, 2.1, true, &mut rng);
    let model = ModelParams::node2vec(0.25, 4.0).bind(&graph)?;
    let config = BenchConfig {
        steps: 500_000,
        ..Default::default()
    };
    let rows = SamplerKind::ALL
        .iter()
        .map(|&kind| bench_sampler(&model, kind, &config))
        .collect::<Result<Vec<_>, _>>()?;
    write_bench_csv(&rows, &mut std::io::stdout())?;
    Ok(())
}
